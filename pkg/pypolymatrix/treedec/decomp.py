# -*- coding: utf-8 -*-
#
# Tree decompositions
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
	"TreeDecError",
	"TreeDecomposition",
	"validate",
	"smallExactTreewidth",
	"SMALL_TREEWIDTH_LIMIT",
]

# Largest vertex count accepted by the exhaustive treewidth search.
SMALL_TREEWIDTH_LIMIT = 12

class TreeDecError(PolymatrixError):
	pass

def _toGraph(graphOrGame):
	if isinstance(graphOrGame, nx.Graph):
		return graphOrGame
	return graphOrGame.graph()

class TreeDecomposition(object):
	"""Tree decomposition: one bag of vertices per tree node.
	Tree nodes are integers. Bags are frozensets.
	"""

	__slots__ = (
		"bags",
		"tree",
		"root",
	)

	def __init__(self, bags, treeEdges=(), root=None):
		if isinstance(bags, dict):
			items = bags.items()
		else:
			items = enumerate(bags)
		self.bags = { int(node) : frozenset(bag) for node, bag in items }
		self.tree = nx.Graph()
		self.tree.add_nodes_from(sorted(self.bags))
		for u, v in treeEdges:
			if u not in self.bags or v not in self.bags:
				raise TreeDecError("Tree edge (%s,%s) references an unknown bag." % (
					u, v))
			if u == v:
				raise TreeDecError("Tree edge (%s,%s) is a self-loop." % (u, v))
			self.tree.add_edge(u, v)
		if root is not None and root not in self.bags:
			raise TreeDecError("Root %s is not a bag." % root)
		self.root = root

	@classmethod
	def fromEliminationOrder(cls, graph, order):
		"""Decomposition induced by eliminating the vertices in the given order.
		Node t holds the bag of the t-th eliminated vertex.
		"""
		graph = _toGraph(graph)
		order = list(order)
		if sorted(order, key=repr) != sorted(graph.nodes, key=repr) or\
		   len(set(order)) != len(order):
			raise TreeDecError("Elimination order is not a permutation "
					   "of the graph's vertices.")
		position = { v : t for t, v in enumerate(order) }
		filled = nx.Graph(graph)
		bags, edges = [], []
		for t, v in enumerate(order):
			later = [ u for u in filled.neighbors(v) if position[u] > t ]
			bags.append(frozenset([ v ] + later))
			for a in later:
				for b in later:
					if position[a] < position[b]:
						filled.add_edge(a, b)
			if later:
				edges.append((t, min(position[u] for u in later)))
			elif t != len(order) - 1:
				# Connect the components into one tree.
				edges.append((t, len(order) - 1))
		return cls(bags, edges)

	@property
	def nodes(self):
		return sorted(self.bags)

	@property
	def width(self):
		if not self.bags:
			return -1
		return max(len(bag) for bag in self.bags.values()) - 1

	def __len__(self):
		return len(self.bags)

	def vertices(self):
		return frozenset().union(*self.bags.values())

	def isTree(self):
		if not self.bags:
			return True
		return nx.is_tree(self.tree)

	def canonicalRoot(self):
		"""The node with the lexicographically smallest sorted bag.
		Ties go to the smallest node id.
		"""
		if not self.bags:
			raise TreeDecError("Empty decomposition has no root.")
		return min(self.bags, key=lambda node: (sorted(self.bags[node]), node))

	def children(self, node, parent):
		return sorted(c for c in self.tree.neighbors(node) if c != parent)

	def __repr__(self):
		return "TreeDecomposition(bags=%d, width=%d)" % (len(self), self.width)

def validate(decomp, graphOrGame):
	"""Check the tree decomposition properties.
	Returns the list of violations. An empty list means valid.
	"""
	graph = _toGraph(graphOrGame)
	violations = []
	if not decomp.isTree():
		violations.append("decomposition tree is not a tree")
	vertices = set(graph.nodes)
	for node in decomp.nodes:
		for p in sorted(decomp.bags[node] - vertices, key=repr):
			violations.append("bag %s contains unknown vertex %s" % (node, p))
	covered = decomp.vertices()
	for p in sorted(vertices - covered, key=repr):
		violations.append("vertex %s uncovered" % (p, ))
	for u, v in sorted(tuple(sorted(e, key=repr)) for e in graph.edges):
		if not any(u in bag and v in bag for bag in decomp.bags.values()):
			violations.append("edge (%s,%s) uncovered" % (u, v))
	for p in sorted(covered & vertices, key=repr):
		holding = [ node for node, bag in decomp.bags.items() if p in bag ]
		if not nx.is_connected(decomp.tree.subgraph(holding)):
			violations.append("bags containing vertex %s are not connected" % (p, ))
	return violations

def smallExactTreewidth(graph, limit=SMALL_TREEWIDTH_LIMIT):
	"""Minimum width decomposition by exhaustive search over elimination
	orderings (memoized over the set of eliminated vertices).
	Among all optimal orderings the lexicographically smallest is used.
	Returns (width, TreeDecomposition).
	"""
	graph = _toGraph(graph)
	vertices = sorted(graph.nodes)
	n = len(vertices)
	if n > limit:
		raise TreeDecError("Exact treewidth search is limited to %d vertices, "
				   "the graph has %d." % (limit, n))
	if n == 0:
		return -1, TreeDecomposition([])
	index = { v : i for i, v in enumerate(vertices) }
	adjacency = [ 0 ] * n
	for u, v in graph.edges:
		adjacency[index[u]] |= 1 << index[v]
		adjacency[index[v]] |= 1 << index[u]
	full = (1 << n) - 1

	def eliminatedDegree(eliminated, i):
		# Vertices outside eliminated reachable from i through eliminated.
		seen = 1 << i
		stack = [ i ]
		reach = 0
		while stack:
			x = stack.pop()
			nb = adjacency[x] & ~seen
			seen |= nb
			reach |= nb & ~eliminated
			inner = nb & eliminated
			while inner:
				low = inner & -inner
				stack.append(low.bit_length() - 1)
				inner ^= low
		return bin(reach).count("1")

	memo = { full : -1 }
	def best(eliminated):
		try:
			return memo[eliminated]
		except KeyError:
			pass
		result = n
		for i in range(n):
			if eliminated & (1 << i):
				continue
			d = eliminatedDegree(eliminated, i)
			if d >= result:
				continue
			result = min(result, max(d, best(eliminated | (1 << i))))
		memo[eliminated] = result
		return result

	width = best(0)
	order, eliminated = [], 0
	while eliminated != full:
		for i in range(n):
			if eliminated & (1 << i):
				continue
			if max(eliminatedDegree(eliminated, i),
			       best(eliminated | (1 << i))) <= width:
				order.append(vertices[i])
				eliminated |= 1 << i
				break
	return width, TreeDecomposition.fromEliminationOrder(graph, order)
