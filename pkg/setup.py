#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import setuptools

APPNAME = 'loopci'


setuptools.setup(
    name=APPNAME,
    version='0.1.0.dev1',
    license='MIT',

    description=(
        'Conditional independence and d-separation in causal theories ' +
        'with feedback loops'
    ),

    install_requires=[
        'blessings',
        'hypothesis',
        'mock',
        'networkx',
        'PyYAML'
    ],

    packages=[APPNAME],
    package_data={
        APPNAME: [
            'data/*.graph',
            'data/*.model',
            'data/*.problem'
        ]
    },

    data_files=[
        ('share/doc/%s' % APPNAME, [
            'LICENSE.md',
            'README.md'
        ])
    ],

    entry_points={
        'console_scripts': [
            'loopci = %s.__main__:main' % APPNAME
        ]
    },

    test_suite='tests'
)
