"""
wcolab -- numerical checks for weighted composition operators on the
harmonic Hardy spaces of the unit ball.
"""
try:
    from .version import version as __version__
except ImportError:
    # not installed; setuptools_scm has not written version.py
    __version__ = "unknown version"
