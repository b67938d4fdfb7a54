"""Back-channel belief exchange between agents."""


def exchange_beliefs(agents, now=0):
    """Broadcast every agent's snapshot and build the merged system view.

    Local beliefs are never modified; each agent only gains inbox entries.
    A shared-component flag is raised when two or more agents implicate the
    same component outside their own sub-applications.
    """
    messages = [a.snapshot(now) for a in agents]
    for a in agents:
        a.inbox += [m for m in messages if m.sender != a.agent_id]
    owners = {}
    for m in messages:
        for comp in m.implicated:
            if comp is not None:
                owners.setdefault(comp, []).append(m.sender)
    flags = [{"component": c, "agents": sorted(s)} for c, s in sorted(owners.items())
             if len(s) >= 2]
    return {"t": now, "agents": [m.to_dict() for m in messages], "shared_flags": flags}
