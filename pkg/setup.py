from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="ocs-sampling",
    version="0.1.0",
    description="Optimal concentric sampling on the unit disk: Zernike collocation, conditioning and Lebesgue constants",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["ocs_cli", "ocs_cli.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        "numpy>=1.23",
        "scipy>=1.9",
        "pandas>=1.5",
        "click>=8.0.0,<9.0.0",
        "rich-click>=1.6.0,<2.0.0",
        "rich>=12.0.0,<14.0.0",
        "pyyaml>=6.0.0,<7.0.0",
        "python-dotenv>=0.19.0,<2.0.0",
        "tqdm>=4.60.0,<5.0.0",
        "joblib>=1.1.0,<2.0.0",
        "scikit-learn>=1.1.0,<2.0.0",
        "pydantic>=2.0,<3.0",
        "pydantic-settings>=2.0.0,<3.0.0",
    ],
    extras_require={"test": ["pytest>=7.0.0,<9.0.0", "pytest-cov>=2.0.0"]},
    entry_points={
        "console_scripts": [
            "ocs=ocs_cli.cli:cli",
        ],
    },
    python_requires=">=3.10",
)
