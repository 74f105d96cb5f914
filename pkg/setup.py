#! /usr/bin/env python
#
# Licensed under a 3-clause BSD style license - see LICENSE.txt

from setuptools import setup

setup()
