# -*- coding: utf-8 -*-
#
# Monotone 1-in-3 SAT formulas
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *

import networkx as nx

__all__ = [
	"ReductionError",
	"FormulaError",
	"Formula",
	"check1in3",
	"CHECK_1IN3_LIMIT",
	"singleClause",
	"fourClauseNo",
	"cubicYes",
	"randomFormula",
	"plantedFormula",
	"randomCubicFormula",
]

# Largest variable count accepted by the exhaustive 1-in-3 check.
CHECK_1IN3_LIMIT = 26

class ReductionError(PolymatrixError):
	pass

class FormulaError(ReductionError):
	pass

class Formula(object):
	"""Monotone 3-CNF. Variables are numbered 1..nVars.
	Every clause holds exactly three distinct variables, sorted.
	"""

	__slots__ = (
		"nVars",
		"clauses",
	)

	class _Line(object):
		"""Raw line.
		"""

		__slots__ = (
			"lineNr",
			"text",
		)

		def __init__(self, lineNr, text):
			self.lineNr = lineNr
			self.text = text

	def __init__(self, nVars, clauses):
		self.nVars = int(nVars)
		if self.nVars < 0:
			raise FormulaError("Negative variable count.")
		checked = []
		for clause in clauses:
			clause = tuple(int(x) for x in clause)
			if len(clause) != 3 or len(set(clause)) != 3:
				raise FormulaError("Clause %s does not have exactly three "
						   "distinct variables." % (list(clause), ))
			for x in clause:
				if x < 1 or x > self.nVars:
					raise FormulaError("Clause %s: variable %d out of range [1, %d]." % (
						list(clause), x, self.nVars))
			checked.append(tuple(sorted(clause)))
		self.clauses = tuple(checked)

	@property
	def nClauses(self):
		return len(self.clauses)

	def occurrences(self, var):
		return [ j for j, clause in enumerate(self.clauses) if var in clause ]

	def isCubic(self):
		return all(len(self.occurrences(x)) == 3 for x in range(1, self.nVars + 1))

	def incidenceGraph(self):
		g = nx.Graph()
		g.add_nodes_from(("v", x) for x in range(1, self.nVars + 1))
		g.add_nodes_from(("c", j) for j in range(self.nClauses))
		for j, clause in enumerate(self.clauses):
			g.add_edges_from((("c", j), ("v", x)) for x in clause)
		return g

	def isConnected(self):
		g = self.incidenceGraph()
		return len(g) == 0 or nx.is_connected(g)

	def isOneInThree(self, assignment):
		"""assignment[x - 1] is the truth value of variable x.
		"""
		if len(assignment) != self.nVars:
			raise FormulaError("Assignment has %d values, the formula %d variables." % (
				len(assignment), self.nVars))
		return all(sum(1 for x in clause if assignment[x - 1]) == 1
			   for clause in self.clauses)

	def trueVariable(self, assignment, j):
		"""The unique true variable of clause j.
		"""
		true = [ x for x in self.clauses[j] if assignment[x - 1] ]
		if len(true) != 1:
			raise FormulaError("Clause %d has %d true variables." % (j, len(true)))
		return true[0]

	@classmethod
	def fromFile(cls, filepath):
		try:
			with open(filepath, "r", encoding="UTF-8") as fd:
				return cls.fromText(fd.read(), filepath)
		except (IOError, UnicodeError) as e:
			raise FormulaError("Failed to read formula file '%s':\n%s" % (
				filepath, str(e)))

	@classmethod
	def fromText(cls, text, filename=None):
		"""Parse 'p m13sat <n_vars> <n_clauses>' followed by clause lines
		'<v1> <v2> <v3> 0'. Lines starting with 'c' are comments.
		"""
		def parseErr(line, errorText):
			where = filename or "formula data"
			if line is None:
				raise FormulaError("Formula parsing failed in '%s':\n --> %s" % (
					where, errorText))
			raise FormulaError("Formula parsing failed in "
				"'%s' at line %d:\n%s\n --> %s" % (
				where, line.lineNr, line.text, errorText))
		header = None
		clauses = []
		for i, text in enumerate(text.splitlines()):
			line = cls._Line(i + 1, text.strip())
			if not line.text or line.text.startswith("c"):
				continue
			fields = line.text.split()
			if fields[0] == "p":
				if header is not None:
					parseErr(line, "Duplicate header")
				if len(fields) != 4 or fields[1] != "m13sat":
					parseErr(line, "Malformed header, expected "
						 "'p m13sat <n_vars> <n_clauses>'")
				try:
					header = (int(fields[2]), int(fields[3]))
				except ValueError:
					parseErr(line, "Non-integer value in header")
				if header[0] < 0 or header[1] < 0:
					parseErr(line, "Negative count in header")
				continue
			if header is None:
				parseErr(line, "Clause before 'p m13sat' header")
			try:
				lits = [ int(f) for f in fields ]
			except ValueError:
				parseErr(line, "Non-integer literal")
			if lits[-1] != 0:
				parseErr(line, "Clause line must end with 0")
			lits = lits[:-1]
			if any(x < 0 for x in lits):
				parseErr(line, "Negative literal in a monotone formula")
			if 0 in lits:
				parseErr(line, "Literal 0 inside a clause")
			if len(lits) != 3:
				parseErr(line, "Clause must have exactly 3 variables")
			if len(set(lits)) != 3:
				parseErr(line, "Repeated variable in clause")
			if any(x > header[0] for x in lits):
				parseErr(line, "Variable out of range [1, %d]" % header[0])
			clauses.append(lits)
		if header is None:
			parseErr(None, "Missing 'p m13sat' header")
		if len(clauses) != header[1]:
			parseErr(None, "Header declares %d clauses, found %d" % (
				header[1], len(clauses)))
		return cls(header[0], clauses)

	def toText(self):
		lines = [ "p m13sat %d %d" % (self.nVars, self.nClauses) ]
		lines.extend("%d %d %d 0" % clause for clause in self.clauses)
		return "\n".join(lines) + "\n"

	def __eq__(self, other):
		return isinstance(other, Formula) and\
		       self.nVars == other.nVars and\
		       self.clauses == other.clauses

	def __ne__(self, other):
		return not self.__eq__(other)

	def __hash__(self):
		return hash((self.nVars, self.clauses))

	def __repr__(self):
		return "Formula(nVars=%d, clauses=%s)" % (
			self.nVars, [ list(c) for c in self.clauses ])

def check1in3(formula, limit=CHECK_1IN3_LIMIT):
	"""Exhaustive Monotone 1-in-3 SAT.
	Returns the first satisfying assignment (tuple of bools) in binary
	counting order with variable 1 as the lowest bit, or None.
	"""
	n = formula.nVars
	if n > limit:
		raise FormulaError("Exhaustive 1-in-3 check is limited to %d variables, "
				   "the formula has %d." % (limit, n))
	occurrences = [ [] for _ in range(n + 1) ]
	for j, clause in enumerate(formula.clauses):
		for x in clause:
			occurrences[x].append(j)
	nrTrue = [ 0 ] * formula.nClauses
	nrOpen = [ 3 ] * formula.nClauses
	assignment = [ False ] * n

	# Most significant variable first, False before True.
	def assign(x):
		if x == 0:
			return True
		for value in (False, True):
			ok = True
			for j in occurrences[x]:
				nrOpen[j] -= 1
				if value:
					nrTrue[j] += 1
				if nrTrue[j] > 1 or (nrOpen[j] == 0 and nrTrue[j] == 0):
					ok = False
			assignment[x - 1] = value
			if ok and assign(x - 1):
				return True
			for j in occurrences[x]:
				nrOpen[j] += 1
				if value:
					nrTrue[j] -= 1
		assignment[x - 1] = False
		return False

	if assign(n):
		return tuple(assignment)
	return None

def singleClause():
	return Formula(3, [ (1, 2, 3) ])

def fourClauseNo():
	"""All 3-subsets of 4 variables. Cubic, and unsatisfiable since
	3 * (number of true variables) would have to equal 4.
	"""
	return Formula(4, [ (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4) ])

def cubicYes():
	"""Cubic instance on 6 variables, satisfied by {1, 2} true.
	"""
	return Formula(6, [ (1, 3, 4), (1, 5, 6), (1, 3, 5),
			    (2, 4, 6), (2, 3, 6), (2, 4, 5) ])

def randomFormula(rng, nVars, nClauses):
	"""Uniformly random clauses over nVars >= 3 variables.
	"""
	if nVars < 3 and nClauses > 0:
		raise FormulaError("Clauses need at least 3 variables.")
	clauses = [ rng.choice(nVars, size=3, replace=False) + 1
		    for _ in range(nClauses) ]
	return Formula(nVars, clauses)

def plantedFormula(rng, nVars, nClauses):
	"""Random satisfiable formula. Returns (formula, planted assignment).
	Every clause holds exactly one planted-true variable.
	"""
	if nVars < 3:
		raise FormulaError("Clauses need at least 3 variables.")
	nrTrue = int(rng.integers(1, nVars - 1))
	trueVars = rng.choice(nVars, size=nrTrue, replace=False) + 1
	falseVars = [ x for x in range(1, nVars + 1) if x not in set(trueVars.tolist()) ]
	clauses = []
	for _ in range(nClauses):
		t = int(rng.choice(trueVars))
		f = rng.choice(falseVars, size=2, replace=False)
		clauses.append((t, int(f[0]), int(f[1])))
	assignment = tuple(x in set(trueVars.tolist()) for x in range(1, nVars + 1))
	return Formula(nVars, clauses), assignment

def randomCubicFormula(rng, nVars, attempts=1000):
	"""Random cubic formula (nVars clauses, every variable in three)
	by matching variable occurrences into triples.
	"""
	if nVars < 3:
		raise FormulaError("Cubic formulas need at least 3 variables.")
	for _ in range(attempts):
		slots = rng.permutation(list(range(1, nVars + 1)) * 3)
		clauses = [ slots[i : i + 3] for i in range(0, len(slots), 3) ]
		if all(len(set(c.tolist())) == 3 for c in clauses):
			return Formula(nVars, clauses)
	raise FormulaError("No cubic formula on %d variables found in %d attempts." % (
		nVars, attempts))
