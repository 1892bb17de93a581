# -*- coding: utf-8 -*-
#
# Witness dynamic program over nice tree decompositions
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.game import *
from pypolymatrix.constraints import *
from pypolymatrix.treedec.decomp import *
from pypolymatrix.treedec.nice import *

import math
import sys
import itertools
from fractions import Fraction

import numpy as np

__all__ = [
	"SolverError",
	"NoCertifiedError",
	"RoundedPayoffGrid",
	"Witness",
	"SolverConfig",
	"LedgerEntry",
	"SolverResult",
	"DpSolver",
	"phase1",
	"phase2",
	"solve",
	"solveConstrained",
	"witnessTablesToJson",
]

class SolverError(PolymatrixError):
	pass

class NoCertifiedError(SolverError):
	"""The root table is empty: no k-uniform eps/4-NE exists.
	"""

class RoundedPayoffGrid(object):
	"""Multiples of eps/(2n). Rounded payoffs are kept as integer grid
	indices, value = index * spacing. Rounding picks the nearest grid
	point, ties go down. Indices are not clamped to the capacity range
	[0, size), since partial sums of normalized payoffs may leave [0, 1].
	"""

	__slots__ = (
		"eps",
		"n",
		"spacing",
		"size",
	)

	def __init__(self, eps, n):
		if not (0 < eps <= 1):
			raise SolverError("Grid eps %s is outside (0, 1]." % eps)
		if n < 1:
			raise SolverError("Grid needs at least one player.")
		self.eps = eps
		self.n = n
		self.spacing = eps / (2 * n)
		self.size = int(math.floor(Fraction(2 * n) / toFraction(eps))) + 1

	def roundIndex(self, x):
		"""Grid index nearest to x (scalar or array).
		"""
		idx = np.ceil(np.asarray(x, dtype=float) / self.spacing - 0.5)
		if idx.ndim == 0:
			return int(idx)
		return idx.astype(np.int64)

	def round(self, x):
		return self.value(self.roundIndex(x))

	def value(self, idx):
		return np.asarray(idx, dtype=float) * self.spacing

	def values(self):
		"""The capacity set P within [0, 1].
		"""
		return self.value(np.arange(self.size))

	@property
	def maxError(self):
		return self.spacing / 2

	def __repr__(self):
		return "RoundedPayoffGrid(eps=%s, n=%d, size=%d)" % (self.eps, self.n, self.size)

class Witness(object):
	"""DP table entry of one node.
	strategies and payoffs are aligned with the sorted node bag:
	strategies holds indices into each player's k-uniform strategy list,
	payoffs holds each player's rounded payoff vector as grid indices.
	"""

	__slots__ = (
		"strategies",
		"payoffs",
		"value",
		"shadow",
		"children",
		"forgotten",
	)

	def __init__(self, strategies, payoffs, value=None, shadow=None,
		     children=(), forgotten=None):
		self.strategies = strategies
		self.payoffs = payoffs
		self.value = value
		self.shadow = shadow
		self.children = children
		self.forgotten = forgotten

	def key(self):
		# carry feeds later OVD steps, equal x does not make witnesses interchangeable.
		return (self.strategies, self.payoffs,
			() if self.value is None else self.value.carry)

	def __repr__(self):
		return "Witness(strategies=%s, payoffs=%s, value=%r)" % (
			list(self.strategies), [ list(p) for p in self.payoffs ], self.value)

class SolverConfig(object):
	"""eps: target accuracy. k: samples per strategy, None for the
	theoretical bound. constraint: optional OvdConstraint.
	supportRestriction: optional strategy set for player 0.
	"""

	__slots__ = (
		"eps",
		"k",
		"constraint",
		"supportRestriction",
		"tol",
		"shadow",
		"threads",
		"debug",
	)

	def __init__(self, eps, k=None, constraint=None, supportRestriction=None,
		     tol=DEFAULT_TOL, shadow=False, threads=1, debug=0):
		if not (0 < eps <= 1):
			raise SolverError("Solver eps %s is outside (0, 1]." % eps)
		if k is not None and k < 1:
			raise SolverError("Solver k = %d is below 1." % k)
		if tol < 0:
			raise SolverError("Negative tolerance.")
		self.eps = eps
		self.k = k
		self.constraint = constraint
		self.supportRestriction = (None if supportRestriction is None
					   else frozenset(supportRestriction))
		self.tol = tol
		self.shadow = shadow
		self.threads = max(1, threads)
		self.debug = debug

	@property
	def constrained(self):
		return self.constraint is not None

	def resolveK(self, game):
		if self.k is not None:
			return self.k
		if game.n == 0:
			return 1
		return kBound(game.n, max(game.actions), self.eps)

class LedgerEntry(object):
	"""Rounding error observed at one node against its bound f(v) eps/(4n).
	"""

	__slots__ = (
		"nodeId",
		"forgets",
		"bound",
		"observed",
	)

	def __init__(self, nodeId, forgets, bound, observed):
		self.nodeId = nodeId
		self.forgets = forgets
		self.bound = bound
		self.observed = observed

	@property
	def ok(self):
		return self.observed <= self.bound + 1e-12

	def toJson(self):
		return {
			"node"		: self.nodeId,
			"forgets"	: self.forgets,
			"bound"		: self.bound,
			"observed"	: self.observed,
		}

class SolverResult(object):
	SOLVED		= "SOLVED"
	NO_CERTIFIED	= "NO_CERTIFIED"

	__slots__ = (
		"status",
		"profile",
		"kProfile",
		"k",
		"eps",
		"value",
		"originalValue",
		"witnessCounts",
		"candidateBoundLog10",
		"runtime",
		"ledger",
		"records",
		"nice",
		"tables",
	)

	def __init__(self, **kwargs):
		for name in self.__slots__:
			setattr(self, name, kwargs.get(name))

	@property
	def solved(self):
		return self.status == self.SOLVED

	@property
	def maxLedgerError(self):
		if not self.ledger:
			return None
		return max(e.observed for e in self.ledger)

	def ledgerViolations(self):
		return [ e for e in (self.ledger or []) if not e.ok ]

	def diagnostics(self):
		d = {
			"status"		: self.status,
			"k"			: self.k,
			"eps"			: self.eps,
			"witness_counts"	: list(self.witnessCounts or []),
			"max_witnesses"		: max(self.witnessCounts or [ 0 ]),
			"candidate_bound_log10"	: self.candidateBoundLog10,
		}
		if self.value is not None:
			d["g_value"] = (None if self.value.x is None
					else float(self.value.x))
		if self.originalValue is not None:
			d["g_value_original"] = (None if self.originalValue.x is None
						 else float(self.originalValue.x))
		if self.ledger is not None:
			d["max_ledger_error"] = self.maxLedgerError
			d["ledger_violations"] = len(self.ledgerViolations())
		return d

class DpSolver(object):
	"""Phase 1 builds the witness table of every nice node bottom-up,
	phase 2 unrolls a root witness into a k-uniform profile.
	The game must be normalized.
	"""

	PFX = "DP: "

	def __init__(self, game, nice, cfg):
		self.game = game
		self.nice = nice
		self.cfg = cfg
		self.k = cfg.resolveK(game)
		self.__debug = cfg.debug
		self.__checkNormalized()
		violations = validateNice(nice, game)
		if violations:
			raise SolverError("Decomposition does not fit the game:\n%s" %
					  "\n".join(violations))
		self.grid = RoundedPayoffGrid(cfg.eps, max(game.n, 1))
		self.kStrategies = [ enumerateKUniform(m, self.k) for m in game.actions ]
		self.kProbs = [ np.array([ ks.counts(m) for ks in strats ], dtype=float) / self.k
				for m, strats in zip(game.actions, self.kStrategies) ]
		self.__exactGame = None
		self.__exactProbs = {}
		self.__contrib = {}
		self.__forgets = forgetCounts(nice)
		self.ledger = [] if cfg.shadow else None
		self.witnessCounts = [ 0 ] * len(nice)
		self.__debugMsg("n=%d k=%d eps=%s nodes=%d width=%d" % (
			game.n, self.k, cfg.eps, len(nice), nice.width))

	def __debugMsg(self, msg):
		if self.__debug:
			print(self.PFX + msg, file=sys.stderr)

	def __checkNormalized(self):
		tol = self.cfg.tol
		for i in range(self.game.n):
			hi, lo = payoffRange(self.game, i)
			if lo < -tol or hi > 1 + tol:
				raise SolverError("Game is not normalized: player %d has pure "
					"payoff range [%s, %s]." % (i, lo, hi))

	def __contribution(self, i, j):
		"""Row t: payoff vector of i from edge (i, j) when j plays
		its k-uniform strategy t.
		"""
		try:
			return self.__contrib[(i, j)]
		except KeyError:
			c = self.kProbs[j] @ np.asarray(self.game.matrix(i, j), dtype=float).T
			self.__contrib[(i, j)] = c
			return c

	def __exact(self, i, t):
		try:
			return self.__exactProbs[(i, t)]
		except KeyError:
			probs = self.kStrategies[i][t].toMixed(self.game.actions[i], exact=True).probs
			self.__exactProbs[(i, t)] = probs
			return probs

	@property
	def exactGame(self):
		if self.__exactGame is None:
			self.__exactGame = self.game.toExact()
		return self.__exactGame

	def __allowed(self, player):
		strategies = range(len(self.kStrategies[player]))
		restriction = self.cfg.supportRestriction
		if restriction is None or player != 0:
			return list(strategies)
		return [ t for t in strategies
			 if set(self.kStrategies[player][t].multiset) <= restriction ]

	def __zeros(self, player):
		return (0, ) * self.game.actions[player]

	def __insert(self, table, witness):
		key = witness.key()
		old = table.get(key)
		if old is None:
			table[key] = witness
		elif self.cfg.constrained:
			objective = self.cfg.constraint.objective
			if objective(witness.value) > objective(old.value):
				table[key] = witness

	def __finish(self, table):
		return [ table[key] for key in sorted(table) ]

	def __start(self, node):
		bag = node.bag
		value = self.cfg.constraint.initial() if self.cfg.constrained else None
		payoffs = tuple(self.__zeros(p) for p in bag)
		shadow = tuple(np.zeros(self.game.actions[p]) for p in bag) if self.cfg.shadow else None
		table = {}
		for strategies in itertools.product(*(self.__allowed(p) for p in bag)):
			self.__insert(table, Witness(tuple(strategies), payoffs, value, shadow))
		return self.__finish(table)

	def __introduce(self, node, child):
		p = node.player
		pos = node.bag.index(p)
		allowed = self.__allowed(p)
		zeros = self.__zeros(p)
		table = {}
		for w in child:
			payoffs = w.payoffs[ : pos] + (zeros, ) + w.payoffs[pos : ]
			shadow = None
			if w.shadow is not None:
				shadow = w.shadow[ : pos] +\
					 (np.zeros(self.game.actions[p]), ) +\
					 w.shadow[pos : ]
			for t in allowed:
				strategies = w.strategies[ : pos] + (t, ) + w.strategies[pos : ]
				self.__insert(table, Witness(strategies, payoffs, w.value, shadow,
							     children=(w, )))
		return self.__finish(table)

	def happinessTest(self, witness, bag, player):
		"""Is player, about to be forgotten from bag, eps-happy in the witness?
		Its payoff vector is the rounded one plus the exact contribution of
		its neighbours in the bag.
		"""
		if player not in bag:
			raise SolverError("Player %d has no payoff vector in the witness." % player)
		pos = bag.index(player)
		q = self.grid.value(witness.payoffs[pos])
		for jpos, j in enumerate(bag):
			if j != player and self.game.hasEdge(player, j):
				q = q + self.__contribution(player, j)[witness.strategies[jpos]]
		probs = self.kProbs[player][witness.strategies[pos]]
		return float(probs @ q) >= float(np.max(q)) - self.cfg.eps - self.cfg.tol

	def __forget(self, node, child, childBag):
		p = node.player
		pos = childBag.index(p)
		neighbors = [ (jpos, j) for jpos, j in enumerate(childBag)
			      if j != p and self.game.hasEdge(j, p) ]
		constraint = self.cfg.constraint
		def work(witnesses):
			out = []
			for w in witnesses:
				if not self.happinessTest(w, childBag, p):
					continue
				t = w.strategies[pos]
				payoffs = list(w.payoffs)
				shadow = list(w.shadow) if w.shadow is not None else None
				for jpos, j in neighbors:
					delta = self.__contribution(j, p)[t]
					exact = self.grid.value(payoffs[jpos]) + delta
					payoffs[jpos] = tuple(int(x) for x in self.grid.roundIndex(exact))
					if shadow is not None:
						shadow[jpos] = shadow[jpos] + delta
				value = w.value
				if constraint is not None:
					context = OvdContext(self.exactGame,
							     { j : self.__exact(j, w.strategies[jpos])
							       for jpos, j in neighbors })
					value = constraint.add(context, p, self.__exact(p, t), value)
				out.append(Witness(w.strategies[ : pos] + w.strategies[pos + 1 : ],
						   tuple(payoffs[ : pos] + payoffs[pos + 1 : ]),
						   value,
						   (None if shadow is None else
						    tuple(shadow[ : pos] + shadow[pos + 1 : ])),
						   children=(w, ),
						   forgotten=(p, t)))
			return out
		table = {}
		for chunk in parallelMap(work, child, self.cfg.threads):
			for w in chunk:
				self.__insert(table, w)
		return self.__finish(table)

	def __join(self, node, left, right):
		buckets = {}
		for w in right:
			buckets.setdefault(w.strategies, []).append(w)
		constraint = self.cfg.constraint
		def work(witnesses):
			out = []
			for w1 in witnesses:
				for w2 in buckets.get(w1.strategies, ()):
					payoffs = tuple(tuple(a + b for a, b in zip(p1, p2))
							for p1, p2 in zip(w1.payoffs, w2.payoffs))
					shadow = None
					if w1.shadow is not None:
						shadow = tuple(a + b for a, b in zip(w1.shadow, w2.shadow))
					value = None
					if constraint is not None:
						value = constraint.merge(w1.value, w2.value)
					out.append(Witness(w1.strategies, payoffs, value, shadow,
							   children=(w1, w2)))
			return out
		table = {}
		for chunk in parallelMap(work, left, self.cfg.threads):
			for w in chunk:
				self.__insert(table, w)
		return self.__finish(table)

	def __record(self, node, witnesses):
		if self.ledger is None:
			return
		observed = 0.0
		for w in witnesses:
			for idx, exact in zip(w.payoffs, w.shadow):
				if len(exact):
					observed = max(observed, float(np.max(np.abs(
						self.grid.value(idx) - exact))))
		f = self.__forgets[node.nodeId]
		bound = f * self.cfg.eps / (4 * max(self.game.n, 1))
		entry = LedgerEntry(node.nodeId, f, bound, observed)
		if not entry.ok:
			self.__debugMsg("ledger: node %d error %g exceeds bound %g" % (
				node.nodeId, observed, bound))
		self.ledger.append(entry)

	def phase1(self):
		"""Witness tables of all nodes, indexed by node id.
		"""
		tables = [ None ] * len(self.nice)
		for nodeId in self.nice.postOrder():
			node = self.nice[nodeId]
			if node.kind == NiceNode.START:
				table = self.__start(node)
			elif node.kind == NiceNode.INTRODUCE:
				table = self.__introduce(node, tables[node.children[0]])
			elif node.kind == NiceNode.FORGET:
				childId = node.children[0]
				table = self.__forget(node, tables[childId], self.nice[childId].bag)
			else:
				table = self.__join(node, tables[node.children[0]],
						    tables[node.children[1]])
			tables[nodeId] = table
			self.witnessCounts[nodeId] = len(table)
			self.__record(node, table)
			self.__debugMsg("node %d %s%s: %d witnesses" % (
				nodeId, node.kind,
				"" if node.player is None else " %d" % node.player,
				len(table)))
		return tables

	def rootWitness(self, tables):
		root = tables[self.nice.root]
		if not root:
			return None
		if not self.cfg.constrained:
			return root[0]
		objective = self.cfg.constraint.objective
		best = root[0]
		for w in root[1 : ]:
			if objective(w.value) > objective(best.value):
				best = w
		return best

	def phase2(self, tables):
		"""Follow the provenance of the chosen root witness. Every player
		gets the strategy recorded at its Forget node.
		Returns the list of KUniformStrategy, or None if C(root) is empty.
		"""
		witness = self.rootWitness(tables)
		if witness is None:
			return None
		return self.reconstruct(witness)

	def reconstruct(self, witness):
		"""k-uniform profile recorded along the provenance of any witness
		of the root table.
		"""
		assigned = [ None ] * self.game.n
		stack = [ witness ]
		while stack:
			w = stack.pop()
			if w.forgotten is not None:
				p, t = w.forgotten
				assigned[p] = self.kStrategies[p][t]
			stack.extend(w.children)
		missing = [ p for p, s in enumerate(assigned) if s is None ]
		if missing:
			raise SolverError("Players %s were never forgotten." % missing)
		return assigned

	def candidateBoundLog10(self):
		"""log10 of m^(k w) (2n/eps)^(m w), the per-node candidate capacity.
		"""
		if self.game.n == 0:
			return 0.0
		m = max(self.game.actions)
		w = max(self.nice.width, 0)
		return self.k * w * math.log10(m) +\
		       m * w * math.log10(2 * self.game.n / self.cfg.eps)

def phase1(game, nice, cfg):
	return DpSolver(game, nice, cfg).phase1()

def phase2(tables, nice, game, cfg):
	solver = DpSolver(game, nice, cfg)
	kProfile = solver.phase2(tables)
	if kProfile is None:
		raise NoCertifiedError("No k-uniform eps/4-NE certified.")
	return StrategyProfile.fromKUniform(game, kProfile)

def solve(game, decomposition, cfg):
	"""normalize, convert to nice form, phase 1, phase 2.
	A decomposition that is already nice is used as is.
	"""
	timer = Stopwatch()
	normalized, records = normalize(game)
	if isinstance(decomposition, NiceTreeDecomposition):
		nice = decomposition
	else:
		violations = validate(decomposition, game)
		if violations:
			raise SolverError("Invalid decomposition:\n%s" % "\n".join(violations))
		nice = toNice(decomposition)
	normalized = normalized.toFloat()
	solver = DpSolver(normalized, nice, cfg)
	tables = solver.phase1()
	kProfile = solver.phase2(tables)
	result = SolverResult(status=SolverResult.NO_CERTIFIED,
			      k=solver.k,
			      eps=cfg.eps,
			      witnessCounts=list(solver.witnessCounts),
			      candidateBoundLog10=solver.candidateBoundLog10(),
			      ledger=solver.ledger,
			      records=records,
			      nice=nice,
			      tables=tables)
	if kProfile is not None:
		result.status = SolverResult.SOLVED
		result.kProfile = kProfile
		result.profile = StrategyProfile.fromKUniform(game, kProfile)
		if cfg.constrained:
			exactProfile = StrategyProfile.fromKUniform(game, kProfile, exact=True)
			result.value = cfg.constraint.evaluate(solver.exactGame, exactProfile)
			result.originalValue = cfg.constraint.evaluate(game.toExact(), exactProfile)
	result.runtime = timer.elapsed()
	return result

def solveConstrained(game, decomposition, cfg):
	if not cfg.constrained and cfg.supportRestriction is None:
		raise SolverError("Constrained solving needs a constraint or "
				  "a support restriction.")
	return solve(game, decomposition, cfg)

def witnessTablesToJson(tables, nice, solver):
	def num(x):
		return None if x is None else fractionToStr(x)
	out = []
	for nodeId, table in enumerate(tables):
		node = nice[nodeId]
		out.append({
			"node"		: nodeId,
			"type"		: node.kind,
			"player"	: node.player,
			"bag"		: list(node.bag),
			"witnesses"	: [ {
				"strategies"	: [ list(solver.kStrategies[p][t].multiset)
						    for p, t in zip(node.bag, w.strategies) ],
				"payoffs"	: [ [ float(v) for v in solver.grid.value(idx) ]
						    for idx in w.payoffs ],
				"x"		: None if w.value is None else num(w.value.x),
			} for w in table ],
		})
	return out
