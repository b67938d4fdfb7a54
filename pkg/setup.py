import os

from setuptools import setup

ext_modules = []
if not os.environ.get("FBDIAG_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("fbdiag.kernels._vm", ["src/fbdiag/kernels/_vm.pyx"],
                       extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
