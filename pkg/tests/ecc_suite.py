"""Hand-built basic FBs with written-out expected ECC behaviour.

Each case is an FB type, a list of stimuli ``(event, {input: value})`` and,
per stimulus, the expected ``(states entered, output events fired)``.
"""

TOGGLE = """
fbtype TOGGLE basic
  event_in T
  event_out ON
  event_out OFF
  state OFF_S
  state ON_S
    action -> ON
  state BACK
    action -> OFF
  transition OFF_S -> ON_S on T
  transition ON_S -> BACK on T
  transition BACK -> OFF_S
end_fbtype
"""

COUNTER = """
fbtype COUNTER basic
  event_in REQ
  event_in RST
  event_out CNT with N
  event_out FULL
  data_out N INT = 0
  algorithm INC
    N := N + 1;
end_algorithm
  algorithm ZERO
    N := 0;
end_algorithm
  state IDLE
  state COUNT
    action INC -> CNT
  state DONE
    action -> FULL
  state CLEAR
    action ZERO
  transition IDLE -> COUNT on REQ
  transition IDLE -> CLEAR on RST
  transition COUNT -> DONE when N >= 3
  transition COUNT -> IDLE
  transition DONE -> IDLE
  transition CLEAR -> IDLE
end_fbtype
"""

# two transitions enabled by the same event: declaration order wins
PRIORITY = """
fbtype PRIORITY basic
  event_in REQ
  event_out FIRST
  event_out SECOND
  state S0
  state A
    action -> FIRST
  state B
    action -> SECOND
  transition S0 -> A on REQ
  transition S0 -> B on REQ
  transition A -> S0
  transition B -> S0
end_fbtype
"""

# an event with no enabled transition is dropped, not remembered
UNCONSUMED = """
fbtype UNCONSUMED basic
  event_in GO
  event_in BACK
  event_out MOVED
  state HOME
  state AWAY
    action -> MOVED
  transition HOME -> AWAY on GO
  transition AWAY -> HOME on BACK
end_fbtype
"""

CHAIN = """
fbtype CHAIN basic
  event_in REQ
  event_out E1
  event_out E2
  event_out E3 with V
  data_out V INT = 0
  algorithm ONE
    V := 1;
end_algorithm
  algorithm TWO
    V := V * 10 + 2;
end_algorithm
  state S0
  state S1
    action ONE -> E1
    action TWO -> E2
  state S2
    action -> E3
  transition S0 -> S1 on REQ
  transition S1 -> S2
  transition S2 -> S0
end_fbtype
"""

THRESHOLD = """
fbtype THRESHOLD basic
  event_in REQ with X
  event_out HIGH
  event_out LOW
  event_out MID
  data_in X REAL = 0.0
  state IDLE
  state HI
    action -> HIGH
  state LO
    action -> LOW
  state MD
    action -> MID
  transition IDLE -> HI on REQ when X > 10.0
  transition IDLE -> LO on REQ when X < 0.0
  transition IDLE -> MD on REQ
  transition HI -> IDLE
  transition LO -> IDLE
  transition MD -> IDLE
end_fbtype
"""

MAX2 = """
fbtype MAX2 basic
  event_in REQ with A, B
  event_out CNF with M
  data_in A INT = 0
  data_in B INT = 0
  data_out M INT = 0
  algorithm PICK
    IF A > B THEN
      M := A;
    ELSE
      M := B;
    END_IF;
end_algorithm
  state IDLE
  state RUN
    action PICK -> CNF
  transition IDLE -> RUN on REQ
  transition RUN -> IDLE
end_fbtype
"""

CASES = {
    "toggle": (TOGGLE, [("T", {}), ("T", {}), ("T", {})], [
        (["ON_S"], ["ON"]),
        (["BACK", "OFF_S"], ["OFF"]),
        (["ON_S"], ["ON"]),
    ]),
    "counter": (COUNTER, [("REQ", {}), ("REQ", {}), ("REQ", {}), ("REQ", {}), ("RST", {}),
                          ("REQ", {})], [
        (["COUNT", "IDLE"], ["CNT"]),
        (["COUNT", "IDLE"], ["CNT"]),
        (["COUNT", "DONE", "IDLE"], ["CNT", "FULL"]),
        (["COUNT", "DONE", "IDLE"], ["CNT", "FULL"]),
        (["CLEAR", "IDLE"], []),
        (["COUNT", "IDLE"], ["CNT"]),
    ]),
    "priority": (PRIORITY, [("REQ", {}), ("REQ", {})], [
        (["A", "S0"], ["FIRST"]),
        (["A", "S0"], ["FIRST"]),
    ]),
    "unconsumed": (UNCONSUMED, [("BACK", {}), ("GO", {}), ("GO", {}), ("BACK", {}),
                                ("BACK", {})], [
        ([], []),
        (["AWAY"], ["MOVED"]),
        ([], []),
        (["HOME"], []),
        ([], []),
    ]),
    "chain": (CHAIN, [("REQ", {}), ("REQ", {})], [
        (["S1", "S2", "S0"], ["E1", "E2", "E3"]),
        (["S1", "S2", "S0"], ["E1", "E2", "E3"]),
    ]),
    "threshold": (THRESHOLD, [("REQ", {"X": 5.0}), ("REQ", {"X": 20.0}), ("REQ", {"X": 10.0}),
                              ("REQ", {"X": -0.5})], [
        (["MD", "IDLE"], ["MID"]),
        (["HI", "IDLE"], ["HIGH"]),
        (["MD", "IDLE"], ["MID"]),
        (["LO", "IDLE"], ["LOW"]),
    ]),
    "max2": (MAX2, [("REQ", {"A": 2, "B": 5}), ("REQ", {"A": 7, "B": -1}),
                    ("REQ", {"A": 3, "B": 3})], [
        (["RUN", "IDLE"], ["CNF"]),
        (["RUN", "IDLE"], ["CNF"]),
        (["RUN", "IDLE"], ["CNF"]),
    ]),
}

# final data values checked after the whole sequence
FINAL_VALUES = {"counter": {"N": 1}, "chain": {"V": 12}, "max2": {"M": 3}}


def system_text(type_text, type_name):
    return (type_text + "\ndevice DEV\n\nsubapp APP on DEV\n"
            f"  instance FB : {type_name}\nend_subapp\n")


def run_case(name):
    """Drive one case through the runtime; returns (observed steps, final instance)."""
    from fbdiag.model import parse_system
    from fbdiag.runtime import instantiate

    type_text, stimuli, _ = CASES[name]
    type_name = type_text.split()[1]
    app = instantiate(parse_system(system_text(type_text, type_name)))
    inst = app.instance("FB")
    observed = []
    for event, inputs in stimuli:
        for k, v in inputs.items():
            inst.set(k, v)
        app.post_event("FB", event)
        report = app.step()
        observed.append(([to for _, _, to in report.transitions],
                         [ev for _, ev in report.outputs]))
    return observed, inst
