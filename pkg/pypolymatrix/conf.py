# -*- coding: utf-8 -*-
#
# Configuration file parser
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *

from configparser import ConfigParser as _ConfigParser
from configparser import Error as _ConfigParserError
from fractions import Fraction

__all__ = [
	"PmConfError",
	"PmConf",
]

class PmConfError(PolymatrixError):
	pass

class PmConf(object):
	"""pypolymatrix configuration file parser.
	"""

	# [POLYMATRIX] section
	debug		= 0
	threads		= 1
	seed		= 0
	# [SOLVER] section
	solverEps	= 0.5
	solverK		= 0
	solverTol	= DEFAULT_TOL
	solverShadow	= False
	exportWitnesses	= False
	# [ORACLE] section
	oracleBudget	= 10000000
	gridStep	= 0.25
	trials		= 100
	# [GADGET] section
	gadgetEps	= 0.5
	gadgetC		= None

	@classmethod
	def fromFile(cls, filename):
		try:
			with open(filename, "r", encoding="UTF-8") as fd:
				return cls(fd, filename)
		except (IOError, UnicodeError) as e:
			raise PmConfError("Failed to read '%s': %s" %\
				(filename, str(e)))

	@classmethod
	def defaults(cls):
		return cls(None)

	def __init__(self, fd, filename=None):
		def get(section, option, fallback = None):
			if p.has_option(section, option):
				return p.get(section, option)
			return fallback
		def getboolean(section, option, fallback = None):
			if p.has_option(section, option):
				return p.getboolean(section, option)
			return fallback
		def getint(section, option, fallback = None):
			if p.has_option(section, option):
				return p.getint(section, option)
			return fallback
		def getfloat(section, option, fallback = None):
			if p.has_option(section, option):
				return p.getfloat(section, option)
			return fallback
		try:
			p = _ConfigParser()
			if fd is not None:
				p.read_file(fd, filename)

			# [POLYMATRIX]
			self.debug = getint("POLYMATRIX", "debug",
					    fallback=0)
			if self.debug < 0:
				raise ValueError("Invalid debug")
			self.threads = getint("POLYMATRIX", "threads",
					      fallback=1)
			if self.threads < 1:
				raise ValueError("Invalid threads")
			self.seed = getint("POLYMATRIX", "seed",
					   fallback=0)
			if self.seed < 0:
				raise ValueError("Invalid seed")

			# [SOLVER]
			self.solverEps = getfloat("SOLVER", "eps",
						  fallback=0.5)
			if not (0.0 < self.solverEps <= 1.0):
				raise ValueError("Invalid [SOLVER] eps")
			self.solverK = getint("SOLVER", "k",
					      fallback=0)
			if self.solverK < 0:
				raise ValueError("Invalid [SOLVER] k")
			self.solverTol = getfloat("SOLVER", "tol",
						  fallback=DEFAULT_TOL)
			if self.solverTol < 0.0:
				raise ValueError("Invalid [SOLVER] tol")
			self.solverShadow = getboolean("SOLVER", "shadow",
						       fallback=False)
			self.exportWitnesses = getboolean("SOLVER", "export_witnesses",
							  fallback=False)

			# [ORACLE]
			self.oracleBudget = getint("ORACLE", "budget",
						   fallback=10000000)
			if self.oracleBudget < 1:
				raise ValueError("Invalid [ORACLE] budget")
			self.gridStep = getfloat("ORACLE", "grid_step",
						 fallback=0.25)
			if not (0.0 < self.gridStep <= 1.0):
				raise ValueError("Invalid [ORACLE] grid_step")
			self.trials = getint("ORACLE", "trials",
					     fallback=100)
			if self.trials < 1:
				raise ValueError("Invalid [ORACLE] trials")

			# [GADGET]
			self.gadgetEps = getfloat("GADGET", "eps",
						  fallback=0.5)
			if not (0.0 < self.gadgetEps < 1.0):
				raise ValueError("Invalid [GADGET] eps")
			c = get("GADGET", "c", fallback=None)
			self.gadgetC = Fraction(c.strip()) if c else None

		except (_ConfigParserError, ValueError, ZeroDivisionError) as e:
			raise PmConfError("Polymatrix config file parse "
				"error:\n%s" % str(e))

	def makeSolverConfig(self, constraint=None, supportRestriction=None,
			     eps=None, k=None):
		"""Create a SolverConfig instance based on the configuration.
		Explicit arguments override the configured values.
		"""
		from pypolymatrix.dp_solver import SolverConfig
		if k is None and self.solverK > 0:
			k = self.solverK
		return SolverConfig(eps=(self.solverEps if eps is None else eps),
				    k=k,
				    constraint=constraint,
				    supportRestriction=supportRestriction,
				    tol=self.solverTol,
				    shadow=self.solverShadow,
				    threads=self.threads,
				    debug=self.debug)

	def makeGadgetConstants(self, eps=None):
		"""Create the GadgetConstants for the configured (or given) eps.
		"""
		from pypolymatrix.reductions.gadgets import GadgetConstants, pickConstants
		eps = self.gadgetEps if eps is None else eps
		if self.gadgetC is None:
			return pickConstants(eps)
		return GadgetConstants(eps, self.gadgetC)
