# -*- coding: utf-8 -*-
#
# Gadget games built from Monotone 1-in-3 SAT formulas
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.game import *
from pypolymatrix.reductions.formula import *

from fractions import Fraction

import numpy as np

__all__ = [
	"GadgetConstants",
	"pickConstants",
	"LabeledGame",
	"buildG",
	"buildGprime",
	"buildGtilde",
	"assignmentProfile",
	"allOutProfile",
]

class GadgetConstants(object):
	"""eps in (0,1), c in (max(1 - 3eps/2, 0), 1), kappa = (1 - eps) / (1 + 2c).
	All three are exact Fractions.
	"""

	__slots__ = (
		"eps",
		"c",
		"kappa",
	)

	def __init__(self, eps, c):
		self.eps = toFraction(eps)
		self.c = toFraction(c)
		if not (0 < self.eps < 1):
			raise ReductionError("Gadget eps %s is outside (0, 1)." % (
				fractionToStr(self.eps)))
		lower = max(1 - Fraction(3, 2) * self.eps, Fraction(0))
		if not (lower < self.c < 1):
			raise ReductionError("Gadget constant c = %s is outside (%s, 1)." % (
				fractionToStr(self.c), fractionToStr(lower)))
		self.kappa = (1 - self.eps) / (1 + 2 * self.c)

	def toJson(self):
		return {
			"eps"	: fractionToStr(self.eps),
			"c"	: fractionToStr(self.c),
			"kappa"	: fractionToStr(self.kappa),
		}

	def __repr__(self):
		return "GadgetConstants(eps=%s, c=%s, kappa=%s)" % (
			fractionToStr(self.eps), fractionToStr(self.c),
			fractionToStr(self.kappa))

def pickConstants(eps):
	"""c is the midpoint of its admissible interval.
	"""
	eps = toFraction(eps)
	if not (0 < eps < 1):
		raise ReductionError("Gadget eps %s is outside (0, 1)." % fractionToStr(eps))
	lower = max(1 - Fraction(3, 2) * eps, Fraction(0))
	return GadgetConstants(eps, (lower + 1) / 2)

class LabeledGame(object):
	"""A gadget game together with its formula, roles, strategy names
	and ground truth label.
	"""

	KIND_G		= "G"
	KIND_GPRIME	= "Gprime"
	KIND_GTILDE	= "Gtilde"

	LABEL_YES	= "YES"
	LABEL_NO	= "NO"
	LABEL_UNKNOWN	= "UNKNOWN"

	ROLE_VARIABLE	= "variable"
	ROLE_CLAUSE	= "clause"

	__slots__ = (
		"kind",
		"formula",
		"constants",
		"exactGame",
		"game",
		"roles",
		"label",
		"assignment",
	)

	def __init__(self, kind, formula, constants, exactGame, label, assignment):
		self.kind = kind
		self.formula = formula
		self.constants = constants
		self.exactGame = exactGame
		self.game = exactGame.toFloat()
		self.roles = tuple([ self.ROLE_VARIABLE ] * formula.nVars +
				   [ self.ROLE_CLAUSE ] * formula.nClauses)
		self.label = label
		self.assignment = assignment

	@property
	def strategyNames(self):
		return self.game.strategyNames

	def variablePlayer(self, var):
		return var - 1

	def clausePlayer(self, j):
		return self.formula.nVars + j

	def labelManifest(self):
		return {
			"kind"			: self.kind,
			"label"			: self.label,
			"formula"		: {
				"n_vars"	: self.formula.nVars,
				"clauses"	: [ list(c) for c in self.formula.clauses ],
			},
			"roles"			: list(self.roles),
			"names"			: list(self.game.names),
			"strategy_names"	: [ list(s) for s in self.game.strategyNames ],
			"constants"		: (None if self.constants is None
						   else self.constants.toJson()),
			"assignment"		: (None if self.assignment is None
						   else [ bool(a) for a in self.assignment ]),
		}

def _label(formula):
	if formula.nVars > CHECK_1IN3_LIMIT:
		return LabeledGame.LABEL_UNKNOWN, None
	assignment = check1in3(formula)
	if assignment is None:
		return LabeledGame.LABEL_NO, None
	return LabeledGame.LABEL_YES, assignment

def _matrix(rows):
	return np.array([ [ Fraction(x) for x in row ] for row in rows ], dtype=object)

def _build(kind, formula, constants, clauseMatrices, variableNames, clauseNames):
	"""clauseMatrices(clause, var) returns (A_cv, A_vc).
	"""
	n = formula.nVars
	edges = []
	for j, clause in enumerate(formula.clauses):
		for x in clause:
			acv, avc = clauseMatrices(clause, x)
			edges.append((n + j, x - 1, _matrix(acv), _matrix(avc)))
	strategyNames = [ variableNames ] * n +\
			[ clauseNames(clause) for clause in formula.clauses ]
	names = [ "v%d" % x for x in range(1, n + 1) ] +\
		[ "c%d" % (j + 1) for j in range(formula.nClauses) ]
	exactGame = PolymatrixGame([ len(s) for s in strategyNames ], edges,
				   names=names, strategyNames=strategyNames)
	label, assignment = _label(formula)
	return LabeledGame(kind, formula, constants, exactGame, label, assignment)

def buildG(formula):
	"""Unnormalized game G. Clause strategies name one of the clause's
	variables, variable strategies are True and False.
	"""
	def clauseMatrices(clause, x):
		acv = [ (1, 0) if y == x else (-1, 0) for y in clause ]
		avc = [ [ 0 for y in clause ],
			[ -1 if y == x else 0 for y in clause ] ]
		return acv, avc
	return _build(LabeledGame.KIND_G, formula, None, clauseMatrices,
		      ("True", "False"),
		      lambda clause: tuple("%d" % y for y in clause))

def _gprimeRows(constants, clause, x):
	kappa, c, eps = constants.kappa, constants.c, constants.eps
	third = Fraction(1, 3)
	acv = [ (kappa, c * kappa, 0) if y == x else (0, c * kappa, 0) for y in clause ]
	acv.append((third, third, third))
	good = (1 - eps) / 3
	avc = [ [ good if y == x else 0 for y in clause ] + [ 0 ],
		[ 0 if y == x else good for y in clause ] + [ 0 ],
		[ third ] * 4 ]
	return acv, avc

def buildGprime(formula, constants):
	"""Game G' with the Out strategy for both roles.
	"""
	return _build(LabeledGame.KIND_GPRIME, formula, constants,
		      lambda clause, x: _gprimeRows(constants, clause, x),
		      ("True", "False", "Out"),
		      lambda clause: tuple("%d" % y for y in clause) + ("Out", ))

def buildGtilde(formula, constants):
	"""G' with every pure strategy except Out duplicated.
	Clause order: i, i', k, k', l, l', Out. Variable order:
	True, True', False, False', Out.
	"""
	def dupRows(rows):
		out = []
		for row in rows[ : -1]:
			out.extend((row, row))
		out.append(rows[-1])
		return out
	def dupCols(rows):
		return [ dupRows(list(row)) for row in rows ]
	def clauseMatrices(clause, x):
		acv, avc = _gprimeRows(constants, clause, x)
		return dupRows(dupCols(acv)), dupRows(dupCols(avc))
	def clauseNames(clause):
		names = []
		for y in clause:
			names.extend(("%d" % y, "%d'" % y))
		return tuple(names) + ("Out", )
	return _build(LabeledGame.KIND_GTILDE, formula, constants, clauseMatrices,
		      ("True", "True'", "False", "False'", "Out"),
		      clauseNames)

def _probs(m, weights, exact):
	probs = [ Fraction(0) ] * m
	for a, w in weights.items():
		probs[a] = w
	if exact:
		return np.array(probs, dtype=object)
	return np.array([ float(p) for p in probs ])

def assignmentProfile(labeled, assignment, split=False, exact=False):
	"""Variables play their truth value, clauses the strategy naming
	their unique true variable. With split (G~ only) every player
	mixes half/half over a strategy and its duplicate.
	"""
	formula = labeled.formula
	if not formula.isOneInThree(assignment):
		raise ReductionError("Assignment is not 1-in-3 satisfying.")
	duplicated = labeled.kind == LabeledGame.KIND_GTILDE
	if split and not duplicated:
		raise ReductionError("Split profiles need the duplicated game.")
	stride = 2 if duplicated else 1
	half = Fraction(1, 2)
	def pick(m, a):
		if split:
			return _probs(m, { a : half, a + 1 : half }, exact)
		return _probs(m, { a : Fraction(1) }, exact)
	game = labeled.game
	strategies = []
	for x in range(1, formula.nVars + 1):
		a = 0 if assignment[x - 1] else stride
		strategies.append(pick(game.actions[x - 1], a))
	for j, clause in enumerate(formula.clauses):
		t = formula.trueVariable(assignment, j)
		strategies.append(pick(game.actions[formula.nVars + j],
				       clause.index(t) * stride))
	return StrategyProfile(strategies)

def allOutProfile(labeled, exact=False):
	if labeled.kind == LabeledGame.KIND_G:
		raise ReductionError("Game G has no Out strategy.")
	game = labeled.game
	return StrategyProfile([ _probs(m, { m - 1 : Fraction(1) }, exact)
				 for m in game.actions ])
