import os
from setuptools import setup


descr = 'Semantics of sequential circuits: Mealy machines, rewriting, ' \
        'partial evaluation'

version = None
with open(os.path.join('circe', '__init__.py'), 'r') as fid:
    for line in (line.strip() for line in fid):
        if line.startswith('__version__'):
            version = line.split('=')[1].strip().strip('\'')
            break
if version is None:
    raise RuntimeError('Could not determine version')

DISTNAME = 'circe'
DESCRIPTION = descr
LICENSE = 'BSD (3-clause)'
VERSION = version

setup(name=DISTNAME,
      version=VERSION,
      description=DESCRIPTION,
      long_description=open('README.rst').read(),
      license=LICENSE,
      install_requires=['numpy>=1.12', 'scipy>=1.6', 'scikit-learn>=0.23',
                        'matplotlib>=2.0.0', 'seaborn>=0.7', 'tqdm',
                        'networkx>=2.4', 'graphviz'],
      extras_require={'test': ['pytest', 'numpydoc']},
      packages=['circe', 'circe.datasets', 'circe.utils'],
      package_data={'circe.datasets': ['data/*.circ', 'data/*.csv',
                                       'data/*.rules']},
      entry_points={'console_scripts': ['circe = circe.cli:main']},
      )
