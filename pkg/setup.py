import os

from setuptools import Extension, setup

# The integer elimination kernel has a compiled twin.  Building it is
# optional: when Cython or a C compiler is missing, or FORESTCALC_NO_EXT
# is set, the package installs with the pure Python kernel only.
ext_modules = []
if not os.environ.get("FORESTCALC_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("forestcalc._intelim", ["src/forestcalc/_intelim.pyx"])],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
