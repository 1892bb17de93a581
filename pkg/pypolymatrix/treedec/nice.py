# -*- coding: utf-8 -*-
#
# Nice tree decompositions
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.treedec.decomp import *

__all__ = [
	"NiceNode",
	"NiceTreeDecomposition",
	"toNice",
	"validateNice",
	"forgetCounts",
]

class NiceNode(object):
	"""One node of a nice tree decomposition.
	"""

	START		= "start"
	INTRODUCE	= "introduce"
	FORGET		= "forget"
	JOIN		= "join"

	__slots__ = (
		"nodeId",
		"kind",
		"bag",
		"player",
		"children",
	)

	def __init__(self, nodeId, kind, bag, player=None, children=()):
		self.nodeId = nodeId
		self.kind = kind
		self.bag = tuple(sorted(bag))
		self.player = player
		self.children = tuple(children)

	def __repr__(self):
		if self.player is None:
			return "NiceNode(%d, %s, bag=%s, children=%s)" % (
				self.nodeId, self.kind, list(self.bag), list(self.children))
		return "NiceNode(%d, %s %s, bag=%s, children=%s)" % (
			self.nodeId, self.kind, self.player,
			list(self.bag), list(self.children))

class NiceTreeDecomposition(object):
	"""Rooted binary decomposition with typed nodes.
	Node ids are list indices. Children always have smaller ids than
	their parent, so ascending id order is a valid bottom-up order.
	"""

	__slots__ = (
		"nodes",
		"root",
	)

	def __init__(self, nodes, root):
		self.nodes = tuple(nodes)
		self.root = root

	def __len__(self):
		return len(self.nodes)

	def __getitem__(self, nodeId):
		return self.nodes[nodeId]

	def __iter__(self):
		return iter(self.nodes)

	@property
	def width(self):
		return max(len(node.bag) for node in self.nodes) - 1

	def postOrder(self):
		return list(range(len(self.nodes)))

	def kindCounts(self):
		counts = { kind : 0 for kind in (NiceNode.START, NiceNode.INTRODUCE,
						 NiceNode.FORGET, NiceNode.JOIN) }
		for node in self.nodes:
			counts[node.kind] += 1
		return counts

	def forgetNode(self, player):
		"""The unique Forget node of a player.
		"""
		for node in self.nodes:
			if node.kind == NiceNode.FORGET and node.player == player:
				return node.nodeId
		raise TreeDecError("Player %s is never forgotten." % (player, ))

	def toTreeDecomposition(self):
		edges = [ (node.nodeId, c) for node in self.nodes for c in node.children ]
		return TreeDecomposition([ node.bag for node in self.nodes ], edges,
					 root=self.root)

class _NiceBuilder(object):
	def __init__(self):
		self.nodes = []

	def add(self, kind, bag, player=None, children=()):
		node = NiceNode(len(self.nodes), kind, bag, player, children)
		self.nodes.append(node)
		return node

	def forget(self, top, players):
		for p in sorted(players):
			top = self.add(NiceNode.FORGET, set(top.bag) - { p }, p, (top.nodeId, ))
		return top

	def introduce(self, top, players):
		for p in sorted(players):
			top = self.add(NiceNode.INTRODUCE, set(top.bag) | { p }, p, (top.nodeId, ))
		return top

def toNice(decomp, root=None):
	"""Convert a tree decomposition into nice form.
	The root defaults to the canonical root. Children are processed in
	ascending node id order. Branches of a node with several children are
	first reduced to the shared bag (bag of the node intersected with the
	union of its children's bags), then joined left-deep, then the rest of
	the node's bag is introduced. A Forget chain empties the root bag.
	"""
	if not decomp.isTree():
		raise TreeDecError("Cannot convert: decomposition tree is not a tree.")
	builder = _NiceBuilder()
	if len(decomp) == 0:
		start = builder.add(NiceNode.START, ())
		return NiceTreeDecomposition(builder.nodes, start.nodeId)
	if root is None:
		root = decomp.canonicalRoot() if decomp.root is None else decomp.root

	def build(node, parent):
		bag = decomp.bags[node]
		children = decomp.children(node, parent)
		if not children:
			return builder.add(NiceNode.START, bag)
		shared = bag & frozenset().union(*(decomp.bags[c] for c in children))
		top = None
		for c in children:
			branch = build(c, node)
			branch = builder.forget(branch, set(branch.bag) - shared)
			branch = builder.introduce(branch, shared - set(branch.bag))
			if top is None:
				top = branch
			else:
				top = builder.add(NiceNode.JOIN, shared, None,
						  (top.nodeId, branch.nodeId))
		return builder.introduce(top, bag - shared)

	top = build(root, None)
	top = builder.forget(top, top.bag)
	return NiceTreeDecomposition(builder.nodes, top.nodeId)

def validateNice(nice, graphOrGame=None):
	"""Check the nice-form invariants, and optionally the decomposition
	properties against a graph or game. Returns the list of violations.
	"""
	violations = []
	parents = [ 0 ] * len(nice)
	for node in nice:
		for c in node.children:
			if c < 0 or c >= len(nice):
				violations.append("node %d: unknown child %d" % (node.nodeId, c))
				continue
			parents[c] += 1
	for node in nice:
		expect = 0 if node.nodeId == nice.root else 1
		if parents[node.nodeId] != expect:
			violations.append("node %d has %d parents" % (
				node.nodeId, parents[node.nodeId]))
	if nice[nice.root].bag:
		violations.append("root bag is not empty")
	forgotten = {}
	for node in nice:
		bag = set(node.bag)
		kids = [ nice[c] for c in node.children if 0 <= c < len(nice) ]
		if node.kind == NiceNode.START:
			if kids:
				violations.append("start node %d has children" % node.nodeId)
		elif node.kind == NiceNode.JOIN:
			if len(kids) != 2:
				violations.append("join node %d does not have two children" % node.nodeId)
			elif any(set(k.bag) != bag for k in kids):
				violations.append("join node %d: child bags differ" % node.nodeId)
		elif node.kind in (NiceNode.INTRODUCE, NiceNode.FORGET):
			if len(kids) != 1:
				violations.append("%s node %d does not have one child" % (
					node.kind, node.nodeId))
				continue
			child = set(kids[0].bag)
			if node.kind == NiceNode.INTRODUCE:
				if node.player in child or bag != child | { node.player }:
					violations.append("introduce node %d: bag is not child + %s" % (
						node.nodeId, node.player))
			else:
				if node.player not in child or bag != child - { node.player }:
					violations.append("forget node %d: bag is not child - %s" % (
						node.nodeId, node.player))
				forgotten[node.player] = forgotten.get(node.player, 0) + 1
		else:
			violations.append("node %d has unknown kind %s" % (node.nodeId, node.kind))
	for p, count in sorted(forgotten.items()):
		if count != 1:
			violations.append("player %s is forgotten %d times" % (p, count))
	if graphOrGame is not None:
		violations.extend(validate(nice.toTreeDecomposition(), graphOrGame))
	return violations

def forgetCounts(nice):
	"""f(v): number of Forget nodes in the subtree of v, v included.
	"""
	counts = [ 0 ] * len(nice)
	for nodeId in nice.postOrder():
		node = nice[nodeId]
		counts[nodeId] = sum(counts[c] for c in node.children) +\
				 (1 if node.kind == NiceNode.FORGET else 0)
	return counts
