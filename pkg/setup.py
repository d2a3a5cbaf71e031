from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the package still works through the pure-Python fallback
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("carlitzlab._kernels", ["src/carlitzlab/_kernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
