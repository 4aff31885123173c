from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install: the package falls back to the numpy kernel.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("walkergeom._jetcore", ["src/walkergeom/_jetcore.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
