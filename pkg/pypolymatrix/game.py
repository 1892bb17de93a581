# -*- coding: utf-8 -*-
#
# Polymatrix game model, payoff evaluation and equilibrium verification
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *

import json
import math
import itertools
from fractions import Fraction

import numpy as np
import networkx as nx

__all__ = [
	"GameError",
	"PolymatrixGame",
	"MixedStrategy",
	"KUniformStrategy",
	"StrategyProfile",
	"PlayerRegret",
	"RegretReport",
	"NormalizationRecord",
	"payoffVector",
	"expectedPayoffs",
	"socialWelfare",
	"regretReport",
	"isEpsNE",
	"isEpsWSNE",
	"payoffRange",
	"normalize",
	"normalizedWelfare",
	"enumerateKUniform",
	"kBound",
	"kBoundUniform",
	"tvDistance",
	"subgame",
	"gameToJson",
	"gameFromJson",
	"profileToJson",
	"profileFromJson",
	"loadGame",
	"saveGame",
	"loadProfile",
	"saveProfile",
]

class GameError(PolymatrixError):
	pass

def _freeze(matrix):
	matrix.setflags(write=False)
	return matrix

def _isExactArray(a):
	return a.dtype == object

def _toExactArray(a):
	return np.array([ [ toFraction(x) if not isinstance(x, float)
			    else Fraction(x) for x in row ]
			  for row in np.asarray(a, dtype=object).tolist() ],
			dtype=object).reshape(np.shape(a))

def _zeros(m, exact):
	if exact:
		return np.array([ Fraction(0) ] * m, dtype=object)
	return np.zeros(m, dtype=float)

class PolymatrixGame(object):
	"""Polymatrix game: an interaction graph with one bimatrix game per edge.
	The payoff matrix A_ij (shape m(i) x m(j)) holds the payoffs to player i
	on edge (i, j). All matrices are immutable.
	"""

	__slots__ = (
		"n",
		"actions",
		"names",
		"strategyNames",
		"origin",
		"__matrices",
		"__neighbors",
		"__exact",
	)

	def __init__(self, actions, edges=(), names=None, strategyNames=None, origin=None):
		"""actions: per-player pure strategy count m(i).
		edges: iterable of (i, j, A_ij, A_ji).
		"""
		self.actions = tuple(int(m) for m in actions)
		self.n = len(self.actions)
		for i, m in enumerate(self.actions):
			if m < 1:
				raise GameError("Player %d has %d pure strategies. "
					"At least one is required." % (i, m))
		matrices = {}
		for edge in edges:
			try:
				i, j, aij, aji = edge
			except (TypeError, ValueError):
				raise GameError("Invalid edge specification: %r" % (edge, ))
			i, j = int(i), int(j)
			for p in (i, j):
				if p < 0 or p >= self.n:
					raise GameError("Edge (%d,%d): player %d out of range." % (
						i, j, p))
			if i == j:
				raise GameError("Self-loop on player %d." % i)
			if (i, j) in matrices:
				raise GameError("Duplicate edge (%d,%d)." % (i, j))
			aij = np.array(aij, dtype=(object if np.asarray(aij).dtype == object else float))
			aji = np.array(aji, dtype=(object if np.asarray(aji).dtype == object else float))
			if aij.shape != (self.actions[i], self.actions[j]):
				raise GameError("Edge (%d,%d): payoff matrix of player %d has shape %s, "
					"expected %s." % (i, j, i, aij.shape,
					(self.actions[i], self.actions[j])))
			if aji.shape != (self.actions[j], self.actions[i]):
				raise GameError("Edge (%d,%d): payoff matrix of player %d has shape %s, "
					"expected %s." % (i, j, j, aji.shape,
					(self.actions[j], self.actions[i])))
			matrices[(i, j)] = aij
			matrices[(j, i)] = aji
		self.__exact = bool(matrices) and all(_isExactArray(a) for a in matrices.values())
		if not self.__exact:
			matrices = { key : np.array(a, dtype=float) for key, a in matrices.items() }
		self.__matrices = { key : _freeze(a) for key, a in matrices.items() }
		neighbors = [ [] for _ in range(self.n) ]
		for i, j in self.__matrices:
			neighbors[i].append(j)
		self.__neighbors = tuple(tuple(sorted(nb)) for nb in neighbors)
		self.names = tuple(names) if names is not None else None
		self.strategyNames = (tuple(tuple(s) for s in strategyNames)
				      if strategyNames is not None else None)
		self.origin = tuple(origin) if origin is not None else None

	@property
	def exact(self):
		"""True, if all payoffs are exact Fractions.
		"""
		return self.__exact

	def matrix(self, i, j):
		"""Payoff matrix A_ij of player i on edge (i, j).
		"""
		try:
			return self.__matrices[(i, j)]
		except KeyError:
			raise GameError("There is no edge (%d,%d)." % (i, j))

	def hasEdge(self, i, j):
		return (i, j) in self.__matrices

	def neighbors(self, i):
		self.checkPlayer(i)
		return self.__neighbors[i]

	def degree(self, i):
		return len(self.neighbors(i))

	def edges(self):
		"""Sorted list of undirected edges (i, j) with i < j.
		"""
		return sorted((i, j) for i, j in self.__matrices if i < j)

	def checkPlayer(self, i):
		if not isinstance(i, (int, np.integer)) or i < 0 or i >= self.n:
			raise GameError("Player index %r out of range [0, %d)." % (i, self.n))

	def graph(self):
		"""The interaction graph as networkx Graph.
		"""
		g = nx.Graph()
		g.add_nodes_from(range(self.n))
		g.add_edges_from(self.edges())
		return g

	def toFloat(self):
		if not self.__exact:
			return self
		return self.__rebuild(lambda a: np.array(a, dtype=float))

	def toExact(self):
		"""Exact copy. Float payoffs convert to their exact binary value.
		"""
		if self.__exact:
			return self
		return self.__rebuild(_toExactArray)

	def __rebuild(self, convert):
		edges = [ (i, j, convert(self.__matrices[(i, j)]), convert(self.__matrices[(j, i)]))
			  for i, j in self.edges() ]
		return PolymatrixGame(self.actions, edges,
				      names=self.names,
				      strategyNames=self.strategyNames,
				      origin=self.origin)

	def strategyName(self, i, a):
		if self.strategyNames is None:
			return "%d" % a
		return self.strategyNames[i][a]

	def playerName(self, i):
		if self.names is None:
			return "%d" % i
		return self.names[i]

	def __repr__(self):
		return "PolymatrixGame(n=%d, actions=%s, edges=%d, exact=%s)" % (
			self.n, list(self.actions), len(self.edges()), boolToStr(self.__exact))

class MixedStrategy(object):
	"""Probability distribution over one player's pure strategies.
	"""

	__slots__ = (
		"probs",
	)

	def __init__(self, probs):
		arr = np.asarray(probs)
		if arr.dtype == object:
			arr = np.array([ toFraction(p) for p in arr.tolist() ], dtype=object)
		else:
			arr = np.array(arr, dtype=float)
		if arr.ndim != 1 or len(arr) == 0:
			raise GameError("A mixed strategy must be a non-empty vector.")
		if arr.dtype == object:
			if any(p < 0 for p in arr) or sum(arr) != 1:
				raise GameError("Invalid exact mixed strategy %s." % (
					[ fractionToStr(p) for p in arr ], ))
		else:
			if not np.all(np.isfinite(arr)) or np.any(arr < -SUPPORT_THRESHOLD) or\
			   abs(float(np.sum(arr)) - 1.0) > 1e-12:
				raise GameError("Invalid mixed strategy %s." % (arr.tolist(), ))
		self.probs = _freeze(arr)

	@classmethod
	def pure(cls, m, a, exact=False):
		if a < 0 or a >= m:
			raise GameError("Pure strategy %d out of range [0, %d)." % (a, m))
		if exact:
			return cls(np.array([ Fraction(1 if x == a else 0) for x in range(m) ],
					    dtype=object))
		probs = np.zeros(m)
		probs[a] = 1.0
		return cls(probs)

	@classmethod
	def uniform(cls, m, exact=False):
		if exact:
			return cls(np.array([ Fraction(1, m) ] * m, dtype=object))
		return cls(np.full(m, 1.0 / m))

	@property
	def exact(self):
		return self.probs.dtype == object

	def __len__(self):
		return len(self.probs)

	def support(self):
		return tuple(a for a, p in enumerate(self.probs) if p > SUPPORT_THRESHOLD)

	def isPure(self):
		return len(self.support()) == 1

	def maxProb(self):
		return max(self.probs)

	def __eq__(self, other):
		return isinstance(other, MixedStrategy) and\
		       len(self) == len(other) and\
		       all(a == b for a, b in zip(self.probs, other.probs))

	def __ne__(self, other):
		return not self.__eq__(other)

	def __hash__(self):
		return hash(tuple(self.probs.tolist()))

	def __repr__(self):
		if self.exact:
			return "MixedStrategy([%s])" % ", ".join(fractionToStr(p) for p in self.probs)
		return "MixedStrategy(%s)" % self.probs.tolist()

class KUniformStrategy(object):
	"""Uniform distribution over a multiset of k pure strategies.
	The multiset is kept sorted ascending.
	"""

	__slots__ = (
		"k",
		"multiset",
	)

	def __init__(self, multiset):
		self.multiset = tuple(sorted(int(a) for a in multiset))
		self.k = len(self.multiset)
		if self.k < 1:
			raise GameError("A k-uniform strategy needs k >= 1.")

	def counts(self, m):
		c = [ 0 ] * m
		for a in self.multiset:
			if a < 0 or a >= m:
				raise GameError("Pure strategy %d out of range [0, %d)." % (a, m))
			c[a] += 1
		return c

	def toMixed(self, m, exact=False):
		if exact:
			return MixedStrategy(np.array([ Fraction(c, self.k) for c in self.counts(m) ],
						      dtype=object))
		return MixedStrategy(np.array(self.counts(m), dtype=float) / self.k)

	def support(self):
		return tuple(sorted(set(self.multiset)))

	def __eq__(self, other):
		return isinstance(other, KUniformStrategy) and self.multiset == other.multiset

	def __ne__(self, other):
		return not self.__eq__(other)

	def __lt__(self, other):
		return self.multiset < other.multiset

	def __hash__(self):
		return hash(self.multiset)

	def __repr__(self):
		return "KUniformStrategy(%s)" % list(self.multiset)

class StrategyProfile(object):
	"""One mixed strategy per player.
	"""

	__slots__ = (
		"strategies",
	)

	def __init__(self, strategies):
		self.strategies = tuple(s if isinstance(s, MixedStrategy) else MixedStrategy(s)
					for s in strategies)

	@classmethod
	def pure(cls, game, actions, exact=False):
		if len(actions) != game.n:
			raise GameError("Pure profile has %d entries, the game has %d players." % (
				len(actions), game.n))
		return cls([ MixedStrategy.pure(game.actions[i], a, exact)
			     for i, a in enumerate(actions) ])

	@classmethod
	def fromKUniform(cls, game, kStrategies, exact=False):
		return cls([ ks.toMixed(game.actions[i], exact)
			     for i, ks in enumerate(kStrategies) ])

	@classmethod
	def uniform(cls, game, exact=False):
		return cls([ MixedStrategy.uniform(m, exact) for m in game.actions ])

	def __len__(self):
		return len(self.strategies)

	def __getitem__(self, i):
		return self.strategies[i]

	def __iter__(self):
		return iter(self.strategies)

	def replace(self, i, strategy):
		strategies = list(self.strategies)
		strategies[i] = strategy if isinstance(strategy, MixedStrategy) else MixedStrategy(strategy)
		return StrategyProfile(strategies)

	def isPure(self):
		return all(s.isPure() for s in self.strategies)

	def validateFor(self, game):
		if len(self.strategies) != game.n:
			raise GameError("Profile has %d strategies, the game has %d players." % (
				len(self.strategies), game.n))
		for i, s in enumerate(self.strategies):
			if len(s) != game.actions[i]:
				raise GameError("Strategy of player %d has %d entries, "
					"the player has %d pure strategies." % (
					i, len(s), game.actions[i]))

	def __eq__(self, other):
		return isinstance(other, StrategyProfile) and self.strategies == other.strategies

	def __ne__(self, other):
		return not self.__eq__(other)

	def __hash__(self):
		return hash(self.strategies)

	def __repr__(self):
		return "StrategyProfile(%s)" % ", ".join(repr(s) for s in self.strategies)

class PlayerRegret(object):
	"""Regret data of one player.
	"""

	__slots__ = (
		"payoffVector",
		"expected",
		"best",
		"regret",
		"strategyRegrets",
		"support",
	)

	def __init__(self, payoffVector, strategy):
		self.payoffVector = payoffVector
		self.expected = np.dot(strategy.probs, payoffVector)
		self.best = max(payoffVector)
		self.regret = self.best - self.expected
		self.strategyRegrets = np.array([ self.best - p for p in payoffVector ],
						dtype=payoffVector.dtype)
		self.support = strategy.support()

	@property
	def wsRegret(self):
		"""Largest regret among the pure strategies played.
		"""
		return max(self.strategyRegrets[a] for a in self.support)

class RegretReport(object):
	"""Per-player payoff vectors and regrets of a profile.
	"""

	__slots__ = (
		"players",
	)

	def __init__(self, players):
		self.players = tuple(players)

	def __getitem__(self, i):
		return self.players[i]

	def __len__(self):
		return len(self.players)

	@property
	def maxRegret(self):
		if not self.players:
			return 0
		return max(p.regret for p in self.players)

	@property
	def maxWsRegret(self):
		if not self.players:
			return 0
		return max(p.wsRegret for p in self.players)

	def regrets(self):
		return [ p.regret for p in self.players ]

	def toJson(self):
		def num(x):
			if isinstance(x, Fraction):
				return fractionToStr(x)
			return float(x)
		return [ {
			"payoff_vector"		: [ num(x) for x in p.payoffVector ],
			"expected"		: num(p.expected),
			"best_response"		: num(p.best),
			"regret"		: num(p.regret),
			"strategy_regrets"	: [ num(x) for x in p.strategyRegrets ],
		} for p in self.players ]

class NormalizationRecord(object):
	"""Affine map x -> scale * x + shift applied to one player's payoffs.
	"""

	__slots__ = (
		"scale",
		"shift",
	)

	def __init__(self, scale, shift):
		self.scale = scale
		self.shift = shift

	def apply(self, value):
		return self.scale * value + self.shift

	def isIdentity(self):
		return self.scale == 1 and self.shift == 0

	def __repr__(self):
		return "NormalizationRecord(scale=%s, shift=%s)" % (self.scale, self.shift)

def payoffVector(game, profile, i):
	"""p_i(s) = sum over neighbours j of A_ij s_j.
	"""
	game.checkPlayer(i)
	exact = game.exact and profile[i].exact
	p = _zeros(game.actions[i], exact)
	for j in game.neighbors(i):
		p = p + np.dot(game.matrix(i, j), profile[j].probs)
	return p

def expectedPayoffs(game, profile):
	profile.validateFor(game)
	return [ np.dot(profile[i].probs, payoffVector(game, profile, i))
		 for i in range(game.n) ]

def socialWelfare(game, profile):
	return sum(expectedPayoffs(game, profile))

def regretReport(game, profile):
	profile.validateFor(game)
	return RegretReport(PlayerRegret(payoffVector(game, profile, i), profile[i])
			    for i in range(game.n))

def _checkEps(eps):
	if eps < 0:
		raise GameError("Negative eps %s." % eps)

def isEpsNE(game, profile, eps, tol=DEFAULT_TOL):
	"""True, if every player's regret is at most eps + tol.
	Returns (result, RegretReport).
	"""
	_checkEps(eps)
	report = regretReport(game, profile)
	ok = all(p.regret <= eps + tol for p in report.players)
	return ok, report

def isEpsWSNE(game, profile, eps, tol=DEFAULT_TOL):
	"""True, if every played pure strategy has regret at most eps + tol.
	Returns (result, RegretReport).
	"""
	_checkEps(eps)
	report = regretReport(game, profile)
	ok = all(p.wsRegret <= eps + tol for p in report.players)
	return ok, report

def payoffRange(game, i):
	"""Exact pure payoff range (max, min) of player i.
	Edges are independent once i's action is fixed, so the extreme
	totals are sums of per-edge row extremes.
	"""
	nb = game.neighbors(i)
	m = game.actions[i]
	if not nb:
		zero = Fraction(0) if game.exact else 0.0
		return zero, zero
	hi = [ sum(max(game.matrix(i, j)[a]) for j in nb) for a in range(m) ]
	lo = [ sum(min(game.matrix(i, j)[a]) for j in nb) for a in range(m) ]
	return max(hi), min(lo)

def normalize(game):
	"""Map every player's payoffs affinely onto [0, 1].
	Returns (normalized game, list of NormalizationRecord).
	"""
	exact = game.exact
	one = Fraction(1) if exact else 1.0
	records = []
	for i in range(game.n):
		hi, lo = payoffRange(game, i)
		constant = (hi == lo) if exact else abs(hi - lo) <= 1e-12
		if constant:
			records.append(NormalizationRecord(one, -lo))
		else:
			scale = one / (hi - lo)
			records.append(NormalizationRecord(scale, -lo * scale))
	def mapped(i, j):
		a = game.matrix(i, j)
		rec = records[i]
		hi, lo = payoffRange(game, i)
		if (hi == lo) if exact else abs(hi - lo) <= 1e-12:
			return np.array(_zeros(a.size, exact).reshape(a.shape))
		return a * rec.scale + rec.shift / game.degree(i)
	edges = [ (i, j, mapped(i, j), mapped(j, i)) for i, j in game.edges() ]
	normalized = PolymatrixGame(game.actions, edges,
				    names=game.names,
				    strategyNames=game.strategyNames,
				    origin=game.origin)
	return normalized, records

def normalizedWelfare(records, payoffs):
	"""Social welfare on the normalized scale, from the per-player
	expected payoffs of the original game.
	"""
	if len(records) != len(payoffs):
		raise GameError("Got %d payoffs for %d players." % (len(payoffs), len(records)))
	return sum(r.apply(u) for r, u in zip(records, payoffs))

def enumerateKUniform(m, k):
	"""All k-uniform strategies over m pure strategies, sorted.
	"""
	if m < 1 or k < 1:
		raise GameError("enumerateKUniform needs m >= 1 and k >= 1 (got m=%d, k=%d)." % (
			m, k))
	return [ KUniformStrategy(c)
		 for c in itertools.combinations_with_replacement(range(m), k) ]

def __kBoundTerm(n, m, eps):
	if n < 1 or m < 1:
		raise GameError("k bound needs n >= 1 and m >= 1.")
	if eps <= 0 or eps > 1:
		raise GameError("k bound needs 0 < eps <= 1 (got %s)." % eps)
	return (math.log(m) + math.log(n) - math.log(eps) + math.log(8)) / (eps * eps)

def kBound(n, m, eps):
	"""Samples per strategy for the tree-decomposition solver:
	ceil(128 (ln m + ln n - ln eps + ln 8) / eps^2).
	"""
	return int(math.ceil(128 * __kBoundTerm(n, m, eps)))

def kBoundUniform(n, m, eps):
	"""Existence bound for k-uniform eps-NE:
	ceil(8 (ln m + ln n - ln eps + ln 8) / eps^2).
	"""
	return int(math.ceil(8 * __kBoundTerm(n, m, eps)))

def tvDistance(p1, p2):
	"""Largest per-coordinate probability difference over all players.
	"""
	if len(p1) != len(p2):
		raise GameError("Profiles have %d and %d players." % (len(p1), len(p2)))
	dist = 0
	for s1, s2 in zip(p1, p2):
		if len(s1) != len(s2):
			raise GameError("Strategy shape mismatch (%d vs %d)." % (len(s1), len(s2)))
		dist = max([ dist ] + [ abs(a - b) for a, b in zip(s1.probs, s2.probs) ])
	return dist

def subgame(game, players):
	"""Restrict the game to a player subset, dropping every edge
	with an endpoint outside. game.origin of the result maps new
	indices to the original ones.
	"""
	players = sorted(set(players))
	for p in players:
		game.checkPlayer(p)
	index = { p : newIndex for newIndex, p in enumerate(players) }
	edges = [ (index[i], index[j], game.matrix(i, j), game.matrix(j, i))
		  for i, j in game.edges() if i in index and j in index ]
	origin = players if game.origin is None else [ game.origin[p] for p in players ]
	return PolymatrixGame([ game.actions[p] for p in players ], edges,
			      names=(None if game.names is None else
				     [ game.names[p] for p in players ]),
			      strategyNames=(None if game.strategyNames is None else
					     [ game.strategyNames[p] for p in players ]),
			      origin=origin)

def __jsonNum(x):
	if isinstance(x, Fraction):
		return fractionToStr(x)
	return float(x)

def __parseNum(x, exact):
	if exact:
		return toFraction(x)
	if isinstance(x, str):
		return float(Fraction(x))
	return float(x)

def gameToJson(game):
	d = {
		"n"		: game.n,
		"actions"	: list(game.actions),
		"edges"		: [ {
			"u"		: i,
			"v"		: j,
			"payoffs_u"	: [ [ __jsonNum(x) for x in row ]
					    for row in game.matrix(i, j).tolist() ],
			"payoffs_v"	: [ [ __jsonNum(x) for x in row ]
					    for row in game.matrix(j, i).tolist() ],
		} for i, j in game.edges() ],
	}
	if game.names is not None:
		d["names"] = list(game.names)
	if game.strategyNames is not None:
		d["strategy_names"] = [ list(s) for s in game.strategyNames ]
	return d

def gameFromJson(d):
	try:
		n = int(d["n"])
		actions = [ int(m) for m in d["actions"] ]
		if len(actions) != n:
			raise GameError("'actions' has %d entries, 'n' is %d." % (len(actions), n))
		edgeList = d.get("edges", [])
		# Exact, if any payoff is given as a rational string.
		exact = any(isinstance(x, str)
			    for e in edgeList
			    for key in ("payoffs_u", "payoffs_v")
			    for row in e[key] for x in row)
		edges = []
		for e in edgeList:
			mk = lambda rows: np.array([ [ __parseNum(x, exact) for x in row ] for row in rows ],
						   dtype=(object if exact else float))
			edges.append((int(e["u"]), int(e["v"]),
				      mk(e["payoffs_u"]), mk(e["payoffs_v"])))
		return PolymatrixGame(actions, edges,
				      names=d.get("names"),
				      strategyNames=d.get("strategy_names"))
	except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
		raise GameError("Invalid game JSON: %s" % str(e))

def profileToJson(profile):
	return [ [ __jsonNum(p) for p in s.probs ] for s in profile ]

def profileFromJson(d):
	try:
		exact = any(isinstance(p, str) for s in d for p in s)
		if exact:
			return StrategyProfile([ np.array([ toFraction(p) for p in s ], dtype=object)
						 for s in d ])
		return StrategyProfile([ np.array([ float(p) for p in s ]) for s in d ])
	except (TypeError, ValueError, ZeroDivisionError) as e:
		raise GameError("Invalid profile JSON: %s" % str(e))

def __load(filename, what):
	try:
		with open(filename, "r", encoding="UTF-8") as fd:
			return json.load(fd)
	except (IOError, UnicodeError, ValueError) as e:
		raise GameError("Failed to read %s '%s': %s" % (what, filename, str(e)))

def __save(filename, data, what):
	try:
		with open(filename, "w", encoding="UTF-8") as fd:
			json.dump(data, fd, indent=1, sort_keys=True)
			fd.write("\n")
	except (IOError, UnicodeError) as e:
		raise GameError("Failed to write %s '%s': %s" % (what, filename, str(e)))

def loadGame(filename):
	return gameFromJson(__load(filename, "game file"))

def saveGame(filename, game):
	__save(filename, gameToJson(game), "game file")

def loadProfile(filename):
	return profileFromJson(__load(filename, "profile file"))

def saveProfile(filename, profile):
	__save(filename, profileToJson(profile), "profile file")
