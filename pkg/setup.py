from setuptools import setup, find_packages
from pathlib import Path

version = Path("VERSION").read_text().strip()

setup(
    name="sandmonoid",
    version=version,
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "sandmonoid.families": ["fixtures/*.graph"],
    },
    install_requires=[
        "numpy>=1.22",
        "networkx>=2.8",
        "pydantic>=2.0",
        "pyyaml>=6.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "sandmonoid=sandmonoid.main:main",
        ],
    },
    python_requires=">=3.9",
)
