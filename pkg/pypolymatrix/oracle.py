# -*- coding: utf-8 -*-
#
# Brute force equilibrium oracles
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.game import *

import sys
from fractions import Fraction

import numpy as np

__all__ = [
	"OracleError",
	"BudgetExceeded",
	"OracleHit",
	"SamplingReport",
	"PURE_BUDGET",
	"KUNIFORM_BUDGET",
	"GRID_BUDGET",
	"enumeratePureNe",
	"enumerateKUniformNe",
	"gridStrategies",
	"gridSearchWsne",
	"samplingCheck",
	"hitsToJson",
]

PURE_BUDGET	= 10000000
KUNIFORM_BUDGET	= 1000000
GRID_BUDGET	= 10000000

class OracleError(PolymatrixError):
	pass

class BudgetExceeded(OracleError):
	pass

class OracleHit(object):
	"""One profile found by an oracle.
	"""

	__slots__ = (
		"profile",
		"kProfile",
		"report",
		"values",
	)

	def __init__(self, profile, report, kProfile=None, values=None):
		self.profile = profile
		self.report = report
		self.kProfile = kProfile
		self.values = values or {}

	@property
	def maxRegret(self):
		return self.report.maxRegret

	@property
	def maxWsRegret(self):
		return self.report.maxWsRegret

class _Backtracker(object):
	"""Depth-first search over per-player candidate strategies.
	A player is checked as soon as it and all its neighbours are
	assigned, so partial profiles violating the equilibrium condition
	are cut early. The budget caps the number of visited nodes.
	"""

	PFX = "ORACLE: "

	def __init__(self, game, candidates, eps, wellSupported, tol, budget, what, debug=0):
		self.game = game
		self.what = what
		self.debug = debug
		self.candidates = candidates
		self.limit = eps + tol
		self.wellSupported = wellSupported
		self.budget = WorkBudget(budget, what, BudgetExceeded)
		self.contrib = {}
		for i in range(game.n):
			for j in game.neighbors(i):
				a = game.matrix(i, j)
				self.contrib[(i, j)] = [ np.dot(a, s) for s in candidates[j] ]
		self.supports = [ [ [ a for a, p in enumerate(s) if p > SUPPORT_THRESHOLD ]
				    for s in cands ] for cands in candidates ]
		self.order, self.checks = self.__plan()

	def __plan(self):
		"""Greedy order: prefer the player completing most checks,
		then the one with most assigned neighbours, then the lowest index.
		"""
		game = self.game
		closedNb = [ set(game.neighbors(i)) | { i } for i in range(game.n) ]
		assigned, order, checks = set(), [], []
		done = set()
		while len(order) < game.n:
			def score(u):
				after = assigned | { u }
				completes = sum(1 for i in range(game.n)
						if i not in done and closedNb[i] <= after)
				return (-completes, -len(set(game.neighbors(u)) & assigned), u)
			u = min((u for u in range(game.n) if u not in assigned), key=score)
			assigned.add(u)
			order.append(u)
			newly = [ i for i in range(game.n) if i not in done and closedNb[i] <= assigned ]
			done.update(newly)
			checks.append(newly)
		return order, checks

	def __ok(self, i, choice):
		game = self.game
		vec = None
		for j in game.neighbors(i):
			c = self.contrib[(i, j)][choice[j]]
			vec = c if vec is None else vec + c
		if vec is None:
			return True
		best = max(vec)
		if self.wellSupported:
			return all(best - vec[a] <= self.limit
				   for a in self.supports[i][choice[i]])
		s = self.candidates[i][choice[i]]
		return best - np.dot(s, vec) <= self.limit

	def run(self):
		n = self.game.n
		choice = [ None ] * n
		found = []
		def descend(depth):
			if depth == n:
				found.append(tuple(choice))
				return
			u = self.order[depth]
			for t in range(len(self.candidates[u])):
				self.budget.spend()
				choice[u] = t
				if all(self.__ok(i, choice) for i in self.checks[depth]):
					descend(depth + 1)
			choice[u] = None
		descend(0)
		found.sort()
		if self.debug:
			print("%s%s: visited %d nodes, %d hits" % (
				self.PFX, self.what, self.budget.count, len(found)),
			      file=sys.stderr)
		return found

def _pureCandidates(game):
	one = Fraction(1) if game.exact else 1.0
	zero = Fraction(0) if game.exact else 0.0
	cands = []
	for m in game.actions:
		rows = []
		for a in range(m):
			row = [ zero ] * m
			row[a] = one
			rows.append(np.array(row, dtype=(object if game.exact else float)))
		cands.append(rows)
	return cands

def _productSize(sizes):
	total = 1
	for s in sizes:
		total *= s
	return total

def enumeratePureNe(game, eps, budget=PURE_BUDGET, tol=DEFAULT_TOL, debug=0):
	"""All pure eps-WSNE (equivalently eps-NE), in lexicographic order
	of the action tuples.
	"""
	if eps < 0:
		raise OracleError("Negative eps.")
	WorkBudget(budget, "pure profiles", BudgetExceeded).require(
		_productSize(game.actions))
	bt = _Backtracker(game, _pureCandidates(game), eps, True, tol, -1, "pure profiles", debug)
	hits = []
	for choice in bt.run():
		profile = StrategyProfile.pure(game, choice, exact=game.exact)
		hits.append(OracleHit(profile, regretReport(game, profile)))
	return hits

def enumerateKUniformNe(game, k, eps, budget=KUNIFORM_BUDGET, tol=DEFAULT_TOL,
			constraints=(), supportRestriction=None, debug=0):
	"""All k-uniform eps-NE, sorted by strategy index tuples.
	constraints: OvdConstraints evaluated (exactly) on every hit.
	supportRestriction: allowed pure strategies of player 0.
	"""
	if eps < 0:
		raise OracleError("Negative eps.")
	kStrategies = [ enumerateKUniform(m, k) for m in game.actions ]
	if supportRestriction is not None and game.n > 0:
		allowed = frozenset(supportRestriction)
		kStrategies[0] = [ ks for ks in kStrategies[0] if set(ks.multiset) <= allowed ]
	WorkBudget(budget, "k-uniform profiles", BudgetExceeded).require(
		_productSize(len(s) for s in kStrategies))
	candidates = [ [ ks.toMixed(m, exact=game.exact).probs for ks in strats ]
		       for m, strats in zip(game.actions, kStrategies) ]
	bt = _Backtracker(game, candidates, eps, False, tol, -1, "k-uniform profiles", debug)
	exactGame = game.toExact() if constraints else None
	hits = []
	for choice in bt.run():
		kProfile = [ kStrategies[i][t] for i, t in enumerate(choice) ]
		profile = StrategyProfile.fromKUniform(game, kProfile, exact=game.exact)
		values = {}
		if constraints:
			exactProfile = StrategyProfile.fromKUniform(game, kProfile, exact=True)
			for c in constraints:
				values[c.name] = c.evaluate(exactGame, exactProfile)
		hits.append(OracleHit(profile, regretReport(game, profile), kProfile, values))
	return hits

def gridStrategies(m, step):
	"""All mixed strategies over m actions whose probabilities are
	multiples of step. 1/step must be an integer. Exact Fractions,
	in descending lexicographic order.
	"""
	if m < 1:
		raise OracleError("Need at least one action.")
	if not (0 < step <= 1):
		raise OracleError("Grid step %s is outside (0, 1]." % step)
	parts = int(round(1 / step))
	if abs(parts * step - 1) > 1e-9:
		raise OracleError("Grid step %s does not divide 1." % step)
	out = []
	def compose(prefix, rest, slots):
		if slots == 1:
			out.append(prefix + [ rest ])
			return
		for c in range(rest, -1, -1):
			compose(prefix + [ c ], rest - c, slots - 1)
	compose([], parts, m)
	return [ np.array([ Fraction(c, parts) for c in counts ], dtype=object)
		 for counts in out ]

def gridSearchWsne(game, eps, step, budget=GRID_BUDGET, tol=DEFAULT_TOL, debug=0):
	"""All eps-WSNE whose probabilities are multiples of step.
	The budget caps the visited partial profiles of the search.
	"""
	if eps < 0:
		raise OracleError("Negative eps.")
	candidates = [ gridStrategies(m, step) for m in game.actions ]
	if not game.exact:
		candidates = [ [ np.array([ float(p) for p in s ]) for s in cands ]
			       for cands in candidates ]
	bt = _Backtracker(game, candidates, eps, True, tol, budget, "grid search", debug)
	hits = []
	for choice in bt.run():
		profile = StrategyProfile([ candidates[i][t] for i, t in enumerate(choice) ])
		hits.append(OracleHit(profile, regretReport(game, profile)))
	return hits

class SamplingReport(object):
	"""Empirical payoff deviation of sampled k-uniform profiles.
	Not a certificate.
	"""

	certified = False

	__slots__ = (
		"k",
		"trials",
		"deviations",
		"eps",
	)

	def __init__(self, k, deviations, eps=None):
		self.k = k
		self.deviations = list(deviations)
		self.trials = len(self.deviations)
		self.eps = eps

	@property
	def maxDeviation(self):
		return max(self.deviations)

	@property
	def median(self):
		return float(np.median(self.deviations))

	def fractionWithin(self, threshold):
		return sum(1 for d in self.deviations if d <= threshold) / self.trials

	@property
	def fractionWithinEps16(self):
		if self.eps is None:
			return None
		return self.fractionWithin(self.eps / 16)

	def toJson(self):
		return {
			"k"			: self.k,
			"trials"		: self.trials,
			"max_deviation"		: self.maxDeviation,
			"median_deviation"	: self.median,
			"deviations"		: list(self.deviations),
			"eps"			: self.eps,
			"fraction_within_eps_16": self.fractionWithinEps16,
			"certified"		: self.certified,
		}

def samplingCheck(game, profile, k, trials, eps=None, seed=0, threads=1):
	"""Draw k pure strategies per player from the profile, trial by trial,
	and record the largest payoff vector deviation. Every trial has its
	own Philox stream spawned from one seed sequence, so the result does
	not depend on the thread count.
	"""
	if trials < 1:
		raise OracleError("Need at least one trial.")
	if k < 1:
		raise OracleError("Need k >= 1.")
	profile.validateFor(game)
	game = game.toFloat()
	probs = [ np.array([ float(p) for p in s.probs ]) for s in profile ]
	probs = [ p / p.sum() for p in probs ]
	original = [ payoffVector(game, StrategyProfile(probs), i) for i in range(game.n) ]
	streams = np.random.SeedSequence(seed).spawn(trials)
	def work(chunk):
		out = []
		for ss in chunk:
			rng = np.random.Generator(np.random.Philox(ss))
			sampled = StrategyProfile([ rng.multinomial(k, p) / k for p in probs ])
			dev = 0.0
			for i in range(game.n):
				diff = np.abs(payoffVector(game, sampled, i) - original[i])
				if len(diff):
					dev = max(dev, float(np.max(diff)))
			out.append(dev)
		return out
	deviations = []
	for chunk in parallelMap(work, streams, threads):
		deviations.extend(chunk)
	return SamplingReport(k, deviations, eps)

def hitsToJson(hits):
	out = []
	for hit in hits:
		d = {
			"profile"	: profileToJson(hit.profile),
			"max_regret"	: float(hit.maxRegret),
			"max_ws_regret"	: float(hit.maxWsRegret),
		}
		if hit.kProfile is not None:
			d["k_uniform"] = [ list(ks.multiset) for ks in hit.kProfile ]
		if hit.values:
			d["values"] = { name : (None if v.x is None else float(v.x))
					for name, v in sorted(hit.values.items()) }
		out.append(d)
	return out
