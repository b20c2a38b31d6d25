from setuptools import find_packages, setup

setup(
    name="rt-spectra",
    version="0.1.0",
    description="Linear Rayleigh-Taylor growth rates of two viscous "
    "compressible layers",
    packages=find_packages(include=["rtspectra", "rtspectra.*"]),
    package_data={"rtspectra.logging": ["logging.yaml"]},
    python_requires=">=3.8",
    install_requires=[
        "joblib>=1.2",
        "numpy>=1.24,<2",
        "pandas>=1.5",
        "PyYAML>=6.0",
        "scipy>=1.10",
        "tqdm>=4.65",
    ],
    extras_require={"test": ["pytest>=7"]},
    entry_points={
        "console_scripts": ["rt-spectra = rtspectra.run.cli:main"],
    },
)
