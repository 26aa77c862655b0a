from setuptools import setup, find_packages

with open("README.md") as f:
    long_description = f.read()

DESCRIPTION = "Stable matching when communities integrate: who gains and who loses"

setup(

    name="integra",
    version="0.1.0",

    packages=find_packages(exclude=['tests', 'tests.*']),
    license='GPLv3',
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
    ],
    description=DESCRIPTION,
    long_description=long_description,

    long_description_content_type="text/markdown",
    include_package_data=True,
    package_data={
        'integra': ['core/defaults/*.yml', 'core/defaults/fixtures/*.mkt', 'core/defaults/fixtures/*.yml'],
    },
    python_requires='>=3.8',

    entry_points={
        'console_scripts': [
            'integra = integra.__main__:main'
        ],
    },
    install_requires=[
        'numpy>=1.20',  # Generator.permuted
        'PyYAML',
        'xarray',       # (to save in netcdf4 format, xarray requires scipy or netcdf4)
        'scipy',
        'pandas',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
)
