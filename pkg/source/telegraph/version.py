# Store the version here so:
# 1) setup.py can read it without importing numpy and scipy
# 2) the package and the result file headers import it from one place
__version__ = '1.0.0'
