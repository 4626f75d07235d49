"""A setuptools based setup module.

See:
https://packaging.python.org/en/latest/distributing.html
https://github.com/pypa/sampleproject
"""
import os

from setuptools import setup, find_packages

# pylint: disable=redefined-builtin

here = os.path.abspath(os.path.dirname(__file__))  # pylint: disable=invalid-name

with open(os.path.join(here, "README.rst"), encoding="utf-8") as fid:
    long_description = fid.read()  # pylint: disable=invalid-name

# Please keep the meta information in sync with narmabench/__init__.py.
setup(
    name="narmabench",
    # Don't forget to update the version in __init__.py and CHANGELOG.rst!
    version="1.0.0",
    description=(
        "Benchmark quantum and classical reservoirs and recurrent networks "
        "on the NARMA-10 task."
    ),
    long_description=long_description,
    author="narmabench developers",
    classifiers=[
        # fmt: off
        'Development Status :: 5 - Production/Stable',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Physics',
        # fmt: on
    ],
    license="License :: OSI Approved :: MIT License",
    keywords="reservoir computing quantum NARMA benchmark echo state network LSTM",
    packages=find_packages(exclude=["tests*"]),
    install_requires=[
        "icontract>=2.6.0,<3",
        "numpy>=1.20,<2",
        "scipy>=1.7,<2",
        "PyYAML>=5.4,<7",
        "tabulate>=0.8.7,<1",
        "py-cpuinfo>=5.0.0,<10",
    ],
    extras_require={
        "dev": [
            "pylint==2.17.5",
            "tox>=3.0.0",
            "pydocstyle>=6.3.0,<7",
            "coverage>=6.5.0,<7",
            "docutils>=0.14,<1",
            "pygments>=2.2.0,<3",
            "mypy==1.5.1",
            "black==23.9.1",
            "types-PyYAML",
            "types-tabulate",
        ]
    },
    entry_points={
        "console_scripts": [
            "narmabench=narmabench.main:main",
        ]
    },
    package_data={"narmabench": ["py.typed"]},
)
