import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="braidHFK",
    version="0.1",
    description="Transverse braid invariants in knot Floer homology: grid computations, braid floors and Heegaard diagram checks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests"]),
    include_package_data=True,
    install_requires=["numpy>=1.22",
                      "pandas>=1.4",
                      "tqdm",
                      "sympy>=1.14",],
    extras_require={"test": ["pytest"]},
    entry_points={
        "console_scripts": ["braidhfk=braidhfk.cli:main"],
    },
    python_requires=">=3.8",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
