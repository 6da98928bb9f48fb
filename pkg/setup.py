import os
import sys
import subprocess as sp
from setuptools import setup, find_packages

# module's descriptor
module_name = "ctp"

file_dir = os.path.dirname(os.path.realpath(__file__))
absdir = lambda p: os.path.join(file_dir, p)

# get the long description from README
with open(absdir("README.md"), "r") as f:
    long_desc = f.read()

############### versioning ###############
verfile = os.path.abspath(os.path.join(module_name, "_version.py"))
version = {"__file__": verfile}
with open(verfile, "r") as fp:
    exec(fp.read(), version)

# execute _version.py to create _version.txt
cmd = [sys.executable, verfile]
sp.run(cmd)

vers = version["get_version"]()
setup(
    name=module_name,
    version=vers,
    description='Computable tree presentations of p-adic, profinite and real structures',
    long_description=long_desc,
    long_description_content_type="text/markdown",
    license='Apache License 2.0',
    packages=find_packages(),
    package_data={module_name: ["_version.txt"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.17",
        "sympy>=1.11",
    ],
    entry_points={
        "console_scripts": ["ctp=ctp.api.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: Apache Software License",

        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
    keywords="computable-structures p-adic profinite quantifier-elimination",
    zip_safe=False
)
