# -*- coding:utf-8 -*-
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


f = open("./VERSION", "r")
long_description = open("./README.md", "r")

kw = {
    "version": f.read().strip(),
    "name": "Spanr",
    "keywords": [
        "graph", "spanner", "fault", "tolerance", "greedy", "linear",
        "programming", "rounding", "LOCAL", "distributed", "decomposition"
    ],
    "author": "Spanr developers",
    "description":
        "Build, verify and benchmark r-fault tolerant graph spanners with "
        "centralized, LP based and LOCAL model algorithms.",
    "long_description": long_description.read(),
    "long_description_content_type": "text/markdown",
    "packages": ["Spanr"],
    "include_package_data": True,
    "install_requires": ["numpy"],
    "extras_require": {"test": ["hypothesis"]},
    "entry_points": {
        "console_scripts": ["spanr=Spanr.cli:main"],
    },
    "license": "BSD licence",
    "classifiers": [
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ],
}

long_description.close()
f.close()

setup(**kw)
