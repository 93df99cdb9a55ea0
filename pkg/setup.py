from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("hqmap._ckernel", ["src/hqmap/_ckernel.pyx"])],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
