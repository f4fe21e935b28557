from setuptools import setup, find_packages

setup(
    name="unitary-scaling",
    version="0.1.0",
    description="Unitary and scaling decomposition of Lindblad dynamics",
    license="MIT",
    include_package_data=True,
    packages=find_packages(exclude=["test"]),
    python_requires=">=3.8",
    install_requires=["numpy>=1.20", "scipy>=1.6"],
    tests_require=["pytest"],
    entry_points={
        "console_scripts": [
            "unitary-scaling = unitaryscaling.dynamics.common:main",
        ]
    },
    data_files=[
        ("share/doc/unitary-scaling", ["README.md", "config_sample.json"]),
    ],
)
