# -*- coding: utf-8 -*-
from setuptools import setup

packages = \
['laplab',
 'laplab.estimators',
 'laplab.graph',
 'laplab.harness',
 'laplab.model',
 'laplab.optimize',
 'laplab.potentials']

package_data = \
{'': ['*']}

install_requires = \
['networkx>=2.6',
 'numpy>=1.22',
 'pydantic>=2.0,<3.0',
 'scipy>=1.8']

entry_points = \
{'console_scripts': ['laplab = laplab.harness.cli:main']}

setup_kwargs = {
    'name': 'laplab',
    'version': '0.0.1rc1',
    'description': 'Local (conditional) likelihood estimators for discrete Markov random fields',
    'long_description': None,
    'author': 'LapLab developers',
    'author_email': None,
    'maintainer': None,
    'maintainer_email': None,
    'url': None,
    'packages': packages,
    'package_data': package_data,
    'install_requires': install_requires,
    'entry_points': entry_points,
    'python_requires': '>=3.8,<3.13',
}


setup(**setup_kwargs)
