from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.treedec.decomp import *
from pypolymatrix.treedec.nice import *
from pypolymatrix.treedec.pace import *
