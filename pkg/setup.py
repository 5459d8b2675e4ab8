"""Builds the optional compiled event-store extension.

The extension is a pure accelerator: if Cython or a C compiler is missing the
build degrades to the pure-Python event store selected at import time.
"""

import logging

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

log = logging.getLogger("rtsim.setup")

try:
    from Cython.Build import cythonize

    HAVE_CYTHON = True
except ImportError:
    HAVE_CYTHON = False


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            log.warning("compiled event store skipped: %s", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            log.warning("compiled event store skipped (%s): %s", ext.name, exc)


if HAVE_CYTHON:
    extensions = cythonize(
        [
            Extension(
                "rtsim._store_cy",
                sources=["src/rtsim/_store_cy.pyx"],
                language="c++",
                extra_compile_args=["-O2", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(
    ext_modules=extensions,
    cmdclass={"build_ext": optional_build_ext},
)
