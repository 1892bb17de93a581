from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.reductions.formula import *
from pypolymatrix.reductions.gadgets import *
