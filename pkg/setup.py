from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="macroblock",
    description="Macrodiversity gain of mmWave uplinks under correlated blockage",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
    ],
    packages=[
        "macroblock",
        "macroblock.tool",
        "macroblock.geometry",
        "macroblock.placement",
        "macroblock.blocking",
        "macroblock.snr",
        "macroblock.sinr",
        "macroblock.oracle",
        "macroblock.engine",
        "macroblock.curve",
    ],
    package_data={"": ["*.lark"]},
    entry_points={
        "console_scripts": ["macroblock=macroblock.cli:main"],
    },
    python_requires=">=3.8",
    use_scm_version=True,
    setup_requires=["setuptools_scm"],
    install_requires=["lark-parser~=0.11", "numpy>=1.20", "matplotlib>=3.3"],
    extras_require={"test": ["pytest>=6", "scipy>=1.6"]},
)
