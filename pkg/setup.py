#!/usr/bin/env python
# encoding: utf-8

from setuptools import setup


setup(
    name='MarketSE',
    version='0.1.0',
    description='Market Systems Engineering: recommendation markets with user and creator participation constraints',
    author='MarketSE Team',
    install_requires=['numpy', 'networkx>=2.0', 'openmdao>=2.4', 'ruamel.yaml', 'jsonschema'],
    package_dir={'': 'src'},
    packages=['marketse', 'marketse.test', 'marketse.market_inputs', 'marketse.examples'],
    package_data={'': ['*.yaml']},
    include_package_data=True,
    entry_points={'console_scripts': ['marketse = marketse.cli:main']},
    license='Apache License, Version 2.0',
    tests_require=['scipy'],
    extras_require={'test': ['scipy']},
    test_suite='marketse.test',
    zip_safe=False
)
