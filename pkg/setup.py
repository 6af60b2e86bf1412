from setuptools import setup, find_packages

# Read the long description from README.md
with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="dimer_interface",
    version="1.0.0",  # Update this for subsequent versions
    description="dimerint: numerics for the square-lattice dimer model with a vertical "
                "weight interface, from Kasteleyn matrices to inverse-Kasteleyn asymptotics.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["dimerint.tests", "dimerint.tests.*"]),
    package_data={"dimerint": ["config/config.json"]},
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        "Intended Audience :: Science/Research",
    ],
    python_requires=">=3.8",
    install_requires=[
        "coloredlogs == 15.0.1",
        "humanfriendly == 10.0",
        "numpy >= 1.21",
        "scipy >= 1.7"
    ],
    entry_points={
        "console_scripts": ["dimerint = dimerint.cli:main"],
    },
    keywords="dimer model, kasteleyn, transfer matrix, green's function, numerics",
    license="MIT",
    include_package_data=True,
)
