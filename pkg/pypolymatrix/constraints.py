# -*- coding: utf-8 -*-
#
# Constrained equilibrium checkers and one-variable-decomposable objectives
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.game import *

from fractions import Fraction

import numpy as np

__all__ = [
	"ConstraintError",
	"ConstraintCheck",
	"CheckResult",
	"check",
	"OvdValue",
	"OvdContext",
	"OvdConstraint",
	"OvdReport",
	"ovdWelfare",
	"ovdMinPayoff",
	"ovdMaxProb",
	"ovdTotalSupport",
	"ovdMinSupport",
	"ovdPlayerSupport",
	"ovdValidate",
	"constraintFromJson",
	"constraintToJson",
	"solverObjective",
	"MAXIMIZE",
	"MINIMIZE",
]

MAXIMIZE	= "maximize"
MINIMIZE	= "minimize"

class ConstraintError(PolymatrixError):
	pass

class ConstraintCheck(object):
	"""One of the nine constrained equilibrium decision problems.
	Players are numbered from 0; "player 1" of the problem
	statements is player 0.
	"""

	WELFARE_AT_LEAST	= 1
	WELFARE_AT_MOST		= 2
	MIN_PAYOFF_AT_MOST	= 3
	RESTRICTED_SUPPORT	= 4
	TV_APART		= 5
	MAX_PROB_AT_MOST	= 6
	TOTAL_SUPPORT_AT_LEAST	= 7
	MIN_SUPPORT_AT_LEAST	= 8
	SUPPORT_AT_LEAST	= 9

	NE	= "NE"
	WSNE	= "WSNE"

	__slots__ = (
		"problem",
		"param",
	)

	def __init__(self, problem, param):
		try:
			self.problem = int(problem)
		except (TypeError, ValueError):
			raise ConstraintError("Invalid problem number %r." % (problem, ))
		if not (1 <= self.problem <= 9):
			raise ConstraintError("Problem number %d is not in 1..9." % self.problem)
		if self.problem == self.RESTRICTED_SUPPORT:
			try:
				param = tuple(sorted(set(int(a) for a in param)))
			except (TypeError, ValueError):
				raise ConstraintError("Problem 4 needs a list of strategies.")
			if not param:
				raise ConstraintError("Problem 4 needs a non-empty strategy set.")
		elif self.problem in (self.TOTAL_SUPPORT_AT_LEAST,
				      self.MIN_SUPPORT_AT_LEAST,
				      self.SUPPORT_AT_LEAST):
			try:
				if isinstance(param, bool) or int(param) != param:
					raise ValueError
			except (TypeError, ValueError):
				raise ConstraintError("Problem %d needs an integer k." % self.problem)
			param = int(param)
			if param < 1:
				raise ConstraintError("Problem %d: k = %d is below 1." % (
					self.problem, param))
		else:
			try:
				param = float(param)
			except (TypeError, ValueError):
				raise ConstraintError("Problem %d needs a numeric parameter." % (
					self.problem))
			lo, hi, loOpen, hiOpen = {
				self.MIN_PAYOFF_AT_MOST		: (0.0, 1.0, False, True),
				self.TV_APART			: (0.0, 1.0, True, False),
				self.MAX_PROB_AT_MOST		: (0.0, 1.0, True, True),
			}.get(self.problem, (0.0, None, self.problem == self.WELFARE_AT_LEAST, False))
			if (param < lo or (loOpen and param == lo)) or\
			   (hi is not None and (param > hi or (hiOpen and param == hi))):
				raise ConstraintError("Problem %d: parameter %s is outside %s%s, %s%s." % (
					self.problem, param,
					"(" if loOpen else "[", lo,
					"n" if hi is None else hi,
					")" if hiOpen else "]"))
		self.param = param

	@property
	def equilibriumKind(self):
		return self.NE if self.problem == self.WELFARE_AT_LEAST else self.WSNE

	@property
	def profileCount(self):
		return 2 if self.problem == self.TV_APART else 1

	def validateFor(self, game):
		"""Check the parameter ranges that depend on the game.
		"""
		n = game.n
		p = self.problem
		if p == self.WELFARE_AT_LEAST and self.param > n:
			raise ConstraintError("Problem 1: u = %s is outside (0, %d]." % (self.param, n))
		if p == self.WELFARE_AT_MOST and self.param >= n:
			raise ConstraintError("Problem 2: u = %s is outside [0, %d)." % (self.param, n))
		if p == self.RESTRICTED_SUPPORT:
			if n < 1:
				raise ConstraintError("Problem 4 needs at least one player.")
			if any(a < 0 or a >= game.actions[0] for a in self.param):
				raise ConstraintError("Problem 4: strategy set %s is not a subset of "
					"player 0's strategies [0, %d)." % (
					list(self.param), game.actions[0]))
		if p == self.TOTAL_SUPPORT_AT_LEAST:
			hi = n * max(game.actions or [ 0 ])
			if self.param > hi:
				raise ConstraintError("Problem 7: k = %d is outside [1, %d]." % (
					self.param, hi))
		if p in (self.MIN_SUPPORT_AT_LEAST, self.SUPPORT_AT_LEAST) and self.param > n:
			raise ConstraintError("Problem %d: k = %d is outside [1, %d]." % (
				p, self.param, n))
		if p in (self.MAX_PROB_AT_MOST, self.SUPPORT_AT_LEAST) and n < 1:
			raise ConstraintError("Problem %d needs at least one player." % p)

	def __repr__(self):
		return "ConstraintCheck(problem=%d, param=%r)" % (self.problem, self.param)

class CheckResult(object):
	__slots__ = (
		"passed",
		"equilibriumOk",
		"predicateOk",
		"value",
		"explanation",
		"reports",
	)

	def __init__(self, equilibriumOk, predicateOk, value, explanation, reports):
		self.equilibriumOk = equilibriumOk
		self.predicateOk = predicateOk
		self.passed = equilibriumOk and predicateOk
		self.value = value
		self.explanation = explanation
		self.reports = reports

	def __bool__(self):
		return self.passed

	__nonzero__ = __bool__

def check(game, profiles, constraint, eps, tol=DEFAULT_TOL):
	"""Verify the equilibrium kind and the predicate of a constraint.
	profiles is one StrategyProfile or, for problem 5, a pair.
	Payoff-valued predicates compare with the additive tolerance tol.
	"""
	if isinstance(profiles, StrategyProfile):
		profiles = (profiles, )
	profiles = tuple(profiles)
	if len(profiles) != constraint.profileCount:
		raise ConstraintError("Problem %d needs %d profile(s), got %d." % (
			constraint.problem, constraint.profileCount, len(profiles)))
	constraint.validateFor(game)
	verify = isEpsNE if constraint.equilibriumKind == ConstraintCheck.NE else isEpsWSNE
	equilibriumOk, reports = True, []
	for profile in profiles:
		ok, report = verify(game, profile, eps, tol)
		equilibriumOk = equilibriumOk and ok
		reports.append(report)
	s = profiles[0]
	p = constraint.problem
	u = constraint.param
	if p in (ConstraintCheck.WELFARE_AT_LEAST, ConstraintCheck.WELFARE_AT_MOST):
		value = socialWelfare(game, s)
		if p == ConstraintCheck.WELFARE_AT_LEAST:
			ok, what = value >= u - tol, "social welfare %s >= %s" % (value, u)
		else:
			ok, what = value <= u + tol, "social welfare %s <= %s" % (value, u)
	elif p == ConstraintCheck.MIN_PAYOFF_AT_MOST:
		value = min(expectedPayoffs(game, s))
		ok, what = value <= u + tol, "smallest expected payoff %s <= %s" % (value, u)
	elif p == ConstraintCheck.RESTRICTED_SUPPORT:
		value = s[0].support()
		ok, what = set(value) <= set(u), "supp(s_0) = %s within %s" % (
			list(value), list(u))
	elif p == ConstraintCheck.TV_APART:
		value = tvDistance(profiles[0], profiles[1])
		ok, what = value >= u - tol, "TV distance %s >= %s" % (value, u)
	elif p == ConstraintCheck.MAX_PROB_AT_MOST:
		value = s[0].maxProb()
		ok, what = value <= u + tol, "largest probability of player 0 %s <= %s" % (value, u)
	elif p == ConstraintCheck.TOTAL_SUPPORT_AT_LEAST:
		value = sum(len(x.support()) for x in s)
		ok, what = value >= u, "total support size %d >= %d" % (value, u)
	elif p == ConstraintCheck.MIN_SUPPORT_AT_LEAST:
		value = min(len(x.support()) for x in s)
		ok, what = value >= u, "smallest support size %d >= %d" % (value, u)
	else:
		value = len(s[0].support())
		ok, what = value >= u, "support size of player 0 %d >= %d" % (value, u)
	explanation = "%s: %s; predicate: %s (%s)" % (
		constraint.equilibriumKind,
		"holds" if equilibriumOk else "violated",
		what, "holds" if ok else "violated")
	return CheckResult(equilibriumOk, bool(ok), value, explanation, reports)

class OvdValue(object):
	"""Value of an OVD objective on a partial profile.
	x is None while undefined. carry is additional exact state,
	a sorted tuple of (player, value) pairs.
	"""

	__slots__ = (
		"x",
		"carry",
	)

	def __init__(self, x, carry=()):
		self.x = x
		self.carry = tuple(carry)

	def key(self):
		return (self.x, self.carry)

	def __eq__(self, other):
		return isinstance(other, OvdValue) and self.key() == other.key()

	def __ne__(self, other):
		return not self.__eq__(other)

	def __hash__(self):
		return hash(self.key())

	def __repr__(self):
		x = "None" if self.x is None else fractionToStr(self.x)
		if not self.carry:
			return "OvdValue(%s)" % x
		return "OvdValue(%s, carry=%s)" % (x, [ (p, fractionToStr(c))
							for p, c in self.carry ])

class OvdContext(object):
	"""What add() may look at when closing a player: the exact game
	and the strategies of the player's neighbours that are still open.
	"""

	__slots__ = (
		"game",
		"openStrategies",
	)

	def __init__(self, game, openStrategies):
		self.game = game
		self.openStrategies = dict(openStrategies)

def _exactProbs(strategy):
	probs = strategy.probs if isinstance(strategy, MixedStrategy) else strategy
	return [ p if isinstance(p, Fraction) else Fraction(p) for p in probs ]

def _bilinear(row, matrix, col):
	total = Fraction(0)
	for a, pa in enumerate(row):
		if not pa:
			continue
		for b, pb in enumerate(col):
			if pb:
				total += pa * matrix[a][b] * pb
	return total

def _min(a, b):
	if a is None:
		return b
	if b is None:
		return a
	return min(a, b)

class OvdConstraint(object):
	"""One-variable-decomposable objective.
	Players are closed one at a time. g(closed set, profile) depends on
	the strategies of closed players and of their neighbours.
	add() closes one more player, merge() combines two closed sets
	without an edge between them.
	"""

	name = None

	def __init__(self, sense=MAXIMIZE):
		if sense not in (MAXIMIZE, MINIMIZE):
			raise ConstraintError("Invalid objective sense %r." % (sense, ))
		self.sense = sense

	def initial(self):
		raise NotImplementedError

	def add(self, context, v, t, value):
		raise NotImplementedError

	def merge(self, a, b):
		raise NotImplementedError

	def evaluate(self, game, profile, closed=None):
		"""Direct computation of g on the closed players.
		"""
		raise NotImplementedError

	def objective(self, value):
		"""Sort key; larger is better. Undefined values sort lowest.
		"""
		if value.x is None:
			return (0, 0)
		return (1, value.x if self.sense == MAXIMIZE else -value.x)

	def __repr__(self):
		return "%s(%s)" % (self.name, self.sense)

class _Welfare(OvdConstraint):
	"""Social welfare. Closing v adds both payoff directions of every
	edge from v to an open neighbour.
	"""

	name = "welfare"

	def initial(self):
		return OvdValue(Fraction(0))

	def add(self, context, v, t, value):
		game = context.game
		t = _exactProbs(t)
		x = value.x
		for j, sj in sorted(context.openStrategies.items()):
			sj = _exactProbs(sj)
			x += _bilinear(t, game.matrix(v, j), sj)
			x += _bilinear(sj, game.matrix(j, v), t)
		return OvdValue(x)

	def merge(self, a, b):
		return OvdValue(a.x + b.x)

	def evaluate(self, game, profile, closed=None):
		closed = set(range(game.n) if closed is None else closed)
		x = Fraction(0)
		for i, j in game.edges():
			if i in closed or j in closed:
				si, sj = _exactProbs(profile[i]), _exactProbs(profile[j])
				x += _bilinear(si, game.matrix(i, j), sj)
				x += _bilinear(sj, game.matrix(j, i), si)
		return OvdValue(x)

class _MinPayoff(OvdConstraint):
	"""Smallest expected payoff among the closed players. The carry
	holds, for every open player next to a closed one, its exact
	payoff from closed neighbours.
	"""

	name = "min_payoff"

	def initial(self):
		return OvdValue(None)

	def add(self, context, v, t, value):
		game = context.game
		t = _exactProbs(t)
		carry = dict(value.carry)
		payoff = carry.pop(v, Fraction(0))
		for j, sj in sorted(context.openStrategies.items()):
			sj = _exactProbs(sj)
			payoff += _bilinear(t, game.matrix(v, j), sj)
			carry[j] = carry.get(j, Fraction(0)) + _bilinear(sj, game.matrix(j, v), t)
		return OvdValue(_min(value.x, payoff), sorted(carry.items()))

	def merge(self, a, b):
		carry = dict(a.carry)
		for p, c in b.carry:
			carry[p] = carry.get(p, Fraction(0)) + c
		return OvdValue(_min(a.x, b.x), sorted(carry.items()))

	def evaluate(self, game, profile, closed=None):
		closed = set(range(game.n) if closed is None else closed)
		x, carry = None, {}
		for i in sorted(closed):
			si = _exactProbs(profile[i])
			x = _min(x, sum((_bilinear(si, game.matrix(i, j), _exactProbs(profile[j]))
					 for j in game.neighbors(i)), Fraction(0)))
		for o in range(game.n):
			if o in closed:
				continue
			nb = [ j for j in game.neighbors(o) if j in closed ]
			if nb:
				so = _exactProbs(profile[o])
				carry[o] = sum((_bilinear(so, game.matrix(o, j), _exactProbs(profile[j]))
						for j in nb), Fraction(0))
		return OvdValue(x, sorted(carry.items()))

def _supportSize(strategy):
	return sum(1 for p in _exactProbs(strategy) if p > SUPPORT_THRESHOLD)

class _MaxProb(OvdConstraint):
	"""Largest probability of one target player, defined once it is closed.
	"""

	name = "max_prob"

	def __init__(self, sense=MINIMIZE, target=0):
		OvdConstraint.__init__(self, sense)
		self.target = target

	def initial(self):
		return OvdValue(None)

	def add(self, context, v, t, value):
		if v == self.target:
			return OvdValue(max(_exactProbs(t)))
		return value

	def merge(self, a, b):
		return a if a.x is not None else b

	def evaluate(self, game, profile, closed=None):
		closed = set(range(game.n) if closed is None else closed)
		if self.target in closed:
			return OvdValue(max(_exactProbs(profile[self.target])))
		return OvdValue(None)

class _TotalSupport(OvdConstraint):
	name = "total_support"

	def initial(self):
		return OvdValue(0)

	def add(self, context, v, t, value):
		return OvdValue(value.x + _supportSize(t))

	def merge(self, a, b):
		return OvdValue(a.x + b.x)

	def evaluate(self, game, profile, closed=None):
		closed = range(game.n) if closed is None else closed
		return OvdValue(sum(_supportSize(profile[i]) for i in closed))

class _MinSupport(OvdConstraint):
	name = "min_support"

	def initial(self):
		return OvdValue(None)

	def add(self, context, v, t, value):
		return OvdValue(_min(value.x, _supportSize(t)))

	def merge(self, a, b):
		return OvdValue(_min(a.x, b.x))

	def evaluate(self, game, profile, closed=None):
		closed = range(game.n) if closed is None else closed
		x = None
		for i in closed:
			x = _min(x, _supportSize(profile[i]))
		return OvdValue(x)

class _PlayerSupport(OvdConstraint):
	name = "player_support"

	def __init__(self, sense=MAXIMIZE, target=0):
		OvdConstraint.__init__(self, sense)
		self.target = target

	def initial(self):
		return OvdValue(None)

	def add(self, context, v, t, value):
		if v == self.target:
			return OvdValue(_supportSize(t))
		return value

	def merge(self, a, b):
		return a if a.x is not None else b

	def evaluate(self, game, profile, closed=None):
		closed = set(range(game.n) if closed is None else closed)
		if self.target in closed:
			return OvdValue(_supportSize(profile[self.target]))
		return OvdValue(None)

def ovdWelfare(sense=MAXIMIZE):
	return _Welfare(sense)

def ovdMinPayoff(sense=MINIMIZE):
	return _MinPayoff(sense)

def ovdMaxProb(target=0):
	return _MaxProb(MINIMIZE, target)

def ovdTotalSupport():
	return _TotalSupport(MAXIMIZE)

def ovdMinSupport():
	return _MinSupport(MAXIMIZE)

def ovdPlayerSupport(target=0):
	return _PlayerSupport(MAXIMIZE, target)

class OvdReport(object):
	__slots__ = (
		"addChecks",
		"mergeChecks",
		"failures",
	)

	def __init__(self):
		self.addChecks = 0
		self.mergeChecks = 0
		self.failures = []

	@property
	def passed(self):
		return not self.failures

	def __bool__(self):
		return self.passed

	__nonzero__ = __bool__

def _randomExactProfile(rng, game):
	strategies = []
	for m in game.actions:
		weights = [ int(w) for w in rng.integers(0, 4, size=m) ]
		if not any(weights):
			weights[int(rng.integers(0, m))] = 1
		total = sum(weights)
		strategies.append(np.array([ Fraction(w, total) for w in weights ], dtype=object))
	return StrategyProfile(strategies)

def ovdValidate(constraint, sampleGames, rng, addSamples=1000, mergeSamples=1000,
		maxFailures=10):
	"""Property test of the add and merge laws with exact equality.
	"""
	games = [ g.toExact() for g in sampleGames if g.n > 0 ]
	if not games:
		raise ConstraintError("OVD validation needs non-empty sample games.")
	report = OvdReport()
	while report.addChecks < addSamples:
		game = games[int(rng.integers(0, len(games)))]
		profile = _randomExactProfile(rng, game)
		closed = set(int(p) for p in np.flatnonzero(rng.random(game.n) < 0.5))
		candidates = [ p for p in range(game.n) if p not in closed ]
		if not candidates:
			continue
		v = candidates[int(rng.integers(0, len(candidates)))]
		context = OvdContext(game, { j : profile[j] for j in game.neighbors(v)
					     if j not in closed })
		expect = constraint.evaluate(game, profile, closed | { v })
		got = constraint.add(context, v, profile[v],
				     constraint.evaluate(game, profile, closed))
		report.addChecks += 1
		if got != expect and len(report.failures) < maxFailures:
			report.failures.append("add: closing %d after %s gave %r, expected %r" % (
				v, sorted(closed), got, expect))
	while report.mergeChecks < mergeSamples:
		game = games[int(rng.integers(0, len(games)))]
		profile = _randomExactProfile(rng, game)
		side = rng.integers(0, 3, size=game.n)
		first = set(int(p) for p in np.flatnonzero(side == 1))
		blocked = first | set(j for p in first for j in game.neighbors(p))
		second = set(int(p) for p in np.flatnonzero(side == 2)) - blocked
		expect = constraint.evaluate(game, profile, first | second)
		got = constraint.merge(constraint.evaluate(game, profile, first),
				       constraint.evaluate(game, profile, second))
		report.mergeChecks += 1
		if got != expect and len(report.failures) < maxFailures:
			report.failures.append("merge: %s and %s gave %r, expected %r" % (
				sorted(first), sorted(second), got, expect))
	return report

def constraintFromJson(spec):
	"""Parse {"problem": 1-9, "param": ...}.
	"""
	if not isinstance(spec, dict):
		raise ConstraintError("Constraint specification must be a JSON object.")
	try:
		return ConstraintCheck(spec["problem"], spec["param"])
	except KeyError as e:
		raise ConstraintError("Constraint specification lacks %s." % str(e))

def constraintToJson(constraint):
	param = constraint.param
	if isinstance(param, tuple):
		param = list(param)
	return { "problem" : constraint.problem, "param" : param }

def solverObjective(constraint):
	"""The solver realization of a constraint.
	Returns (OvdConstraint or None, support restriction or None).
	"""
	p = constraint.problem
	if p == ConstraintCheck.TV_APART:
		raise ConstraintError("Problem 5 concerns pairs of equilibria and "
				      "cannot be solved for.")
	if p == ConstraintCheck.RESTRICTED_SUPPORT:
		return None, constraint.param
	return {
		ConstraintCheck.WELFARE_AT_LEAST	: lambda: ovdWelfare(MAXIMIZE),
		ConstraintCheck.WELFARE_AT_MOST		: lambda: ovdWelfare(MINIMIZE),
		ConstraintCheck.MIN_PAYOFF_AT_MOST	: lambda: ovdMinPayoff(MINIMIZE),
		ConstraintCheck.MAX_PROB_AT_MOST	: lambda: ovdMaxProb(0),
		ConstraintCheck.TOTAL_SUPPORT_AT_LEAST	: lambda: ovdTotalSupport(),
		ConstraintCheck.MIN_SUPPORT_AT_LEAST	: lambda: ovdMinSupport(),
		ConstraintCheck.SUPPORT_AT_LEAST	: lambda: ovdPlayerSupport(0),
	}[p](), None
