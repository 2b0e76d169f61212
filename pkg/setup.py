import os
import re
from setuptools import setup


def get_version(package):
    """
    Return package version as listed in `__version__` in `init.py`.
    """
    init_py = open(os.path.join(package, '__init__.py')).read()
    return re.search("^__version__ = ['\"]([^'\"]+)['\"]", init_py, re.MULTILINE).group(1)


setup(
    name='ipsl',
    install_requires=[
        'pyparsing>=3.0',
        'numpy>=1.17',
        'scipy>=1.4',
        'networkx>=2.6',
    ],
    version=get_version('ipsl'),
    description=('Agent-based simulator of influence process structural learning: status-weighted project funding, '
                 'preferential-attachment tier emergence and genetic evolution of influence structures'),
    license='MIT',
    package_dir={
        'ipsl': 'ipsl',
        'ipsl.config': 'ipsl/config',
        'ipsl.tests': 'ipsl/tests',
    },
    packages=['ipsl', 'ipsl.config', 'ipsl.tests'],
    entry_points={
        'console_scripts': ['ipsl = ipsl.cli:main'],
    },
    test_suite='ipsl.tests',
    python_requires='>=3.7',
    keywords="agent-based simulation collective intelligence preferential attachment genetic algorithm",
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
    ],
)
