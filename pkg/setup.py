"""Setup configuration for the pfbounds package."""

from setuptools import setup, find_packages
from pathlib import Path

# Read README for long description
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

# Read requirements
requirements_file = Path(__file__).parent / "requirements.txt"
requirements = []
if requirements_file.exists():
    requirements = [
        line.strip()
        for line in requirements_file.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]

setup(
    name="pfbounds",
    version="0.1.0",
    author="pfbounds developers",
    description="A-priori discretization error bounds for rare-event failure probabilities, with FORM and SIS",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src") + ["experiments", "scripts"],
    package_dir={"": "src", "experiments": "experiments", "scripts": "scripts"},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=[req for req in requirements if not req.startswith(("pytest", "black"))],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "black>=23.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "pfbounds=scripts.run_experiment:main",
        ],
    },
    include_package_data=True,
    package_data={
        "": ["*.yaml"],
    },
    keywords="reliability failure-probability FORM sequential-importance-sampling finite-elements error-bounds",
)
