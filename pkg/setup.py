"""Build script: compiles the optional propagation kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so the build degrades gracefully when Cython is missing.
"""

from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("cfoptics._kernel_cy", ["src/cfoptics/_kernel_cy.pyx"])],
        language_level="3",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
        },
    )


setup(ext_modules=_extensions())
