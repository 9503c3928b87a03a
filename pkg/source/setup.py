
import re
from setuptools import setup, find_packages

def get_property(prop:str, path:str):
	'''
	Read the requested property (e.g. '__version__') from the specified Python file without importing it.
	'''
	result = re.search(r'{}\s*=\s*[\'"]([^\'"]*)[\'"]'.format(prop), open(path).read())
	return result.group(1)

description = ("A spectral solver for the constrained nonlinear telegraph equation.")
long_description = '''telegraph solves the damped wave (telegraph) equation u_tt = -ν u_t + κ u_xx + F(u) + g(t) on [-1, 1] with Dirichlet boundary conditions and quiescent initial data. Solutions are computed in the sine basis with exact modal propagators, the Duhamel formula and a Fourier-projected fixed-point iteration, and are checked against a constraint inf G(u) > 0 with certified lower bounds. The package includes reference solvers (finite differences and closed-form modal solutions), property batteries and a deterministic command line interface that writes CSV and JSON results.'''

classifiers = [
    "Development Status :: 4 - Beta",
    "Topic :: Scientific/Engineering :: Mathematics",
    "Intended Audience :: Science/Research"
]

setup(
    name="telegraph",
    version=get_property('__version__', 'telegraph/version.py'),
    description=description,
    long_description=long_description,
    classifiers=classifiers,
    install_requires=["numpy>=1.18", "scipy>=1.5"],
    extras_require={"test": ["pytest>=6", "hypothesis>=5"]},
    packages=find_packages(exclude=["tests"]),
    entry_points={"console_scripts": ["telegraph=telegraph.cli:main"]},
    python_requires='>=3.7'
)
