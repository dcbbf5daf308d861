# Copyright 2024. NH Creutz Ladder Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from os import path
from setuptools import setup


this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, 'README.md')) as f:
    long_description = f.read()

VERSION = "0.4.0"

setup(
    version=VERSION,
    name="nh-creutz-ladder",
    author="NH Creutz Ladder Authors",
    license="Apache Software License (Apache Software License 2.0)",
    description="Spectra, topology and skin-effect diagnostics of the non-Hermitian Creutz ladder",
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires=">=3.7",
    packages=["."],
    install_requires=['numpy>=1.21', 'scipy>=1.7', 'simplejson'],
    entry_points={'console_scripts': ['creutz-ladder=cl_cli:main']})
