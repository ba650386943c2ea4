import json
from setuptools import setup, find_packages

with open('package.json') as f:
    package = json.load(f)

package_name = package["name"].replace(" ", "_").replace("-", "_")

setup(
    name=package_name,
    version=package["version"],
    author=package['author'],
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    license=package['license'],
    description=package.get('description', package_name),
    python_requires=package.get('python_requires', '>=3.9'),
    install_requires=[
        'numpy>=1.24.0',
        'pandas>=2.0.0',
        'plotly>=5.18.0',
        'PyYAML>=6.0',
    ],
    entry_points={
        'console_scripts': [
            'miso-pareto=miso_pareto.cli:main',
        ],
    },
    classifiers=[
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
