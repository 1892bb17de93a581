# -*- coding: utf-8 -*-
#
# PACE .gr / .td file parser and writer
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.treedec.decomp import *

import networkx as nx

__all__ = [
	"PaceError",
	"GrParser",
	"TdParser",
	"writeGr",
	"writeTd",
]

class PaceError(TreeDecError):
	pass

class _PaceParser(object):
	"""Common PACE line parser. Vertex and bag ids in the files are
	1-based; the parsed objects are 0-based.
	"""

	KIND = None

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

		def __repr__(self):
			return "_Line(lineNr=%d, text='%s')" % (
				self.lineNr, self.text)

	@classmethod
	def fromFile(cls, filepath, debug=False):
		try:
			with open(filepath, "r", encoding="UTF-8") as fd:
				lines = fd.read().splitlines()
		except (IOError, UnicodeError) as e:
			raise PaceError("Failed to read %s file '%s':\n%s" % (
				cls.KIND, filepath, str(e)))
		return cls(lines, filepath, debug)

	@classmethod
	def fromText(cls, text, filename=None, debug=False):
		return cls(text.splitlines(), filename, debug)

	def __init__(self, lines, filename=None, debug=False):
		self._debug = debug
		self._filename = filename
		self._header = None
		self._lines = [ self._Line(i + 1, text.strip())
				for i, text in enumerate(lines) ]
		self._parse()

	def _parseErr(self, line, errorText):
		if line is None:
			raise PaceError("%s parsing failed in '%s':\n --> %s" % (
				self.KIND, self._filename or "%s data" % self.KIND,
				errorText))
		raise PaceError("%s parsing failed in "
			"'%s' at line %d:\n%s\n --> %s" % (
			self.KIND, self._filename or "%s data" % self.KIND,
			line.lineNr, line.text, errorText))

	def _parseWarn(self, line, errorText):
		if not self._debug:
			return
		warningMsg("PACE: ", "%s parser in '%s' at line %d:\n%s\n --> %s" % (
			self.KIND, self._filename or "%s data" % self.KIND,
			line.lineNr, line.text, errorText))

	def _ints(self, line, fields):
		try:
			return [ int(f) for f in fields ]
		except ValueError:
			self._parseErr(line, "Non-integer value")

	def _contentLines(self):
		for line in self._lines:
			if not line.text or line.text.startswith("c"):
				continue
			yield line

	def _parse(self):
		raise NotImplementedError

class GrParser(_PaceParser):
	"""Graph file: 'p tw <n> <m>' followed by m edge lines '<u> <v>'.
	"""

	KIND = "GR"

	def _parse(self):
		self.graph = nx.Graph()
		nrEdges = 0
		for line in self._contentLines():
			fields = line.text.split()
			if fields[0] == "p":
				if self._header is not None:
					self._parseErr(line, "Duplicate header")
				if len(fields) != 4 or fields[1] != "tw":
					self._parseErr(line, "Malformed header, expected 'p tw <n> <m>'")
				n, m = self._ints(line, fields[2:])
				if n < 0 or m < 0:
					self._parseErr(line, "Negative count in header")
				self._header = (n, m)
				self.graph.add_nodes_from(range(n))
				continue
			if self._header is None:
				self._parseErr(line, "Edge before 'p tw' header")
			if len(fields) != 2:
				self._parseErr(line, "Malformed edge line, expected '<u> <v>'")
			u, v = self._ints(line, fields)
			n = self._header[0]
			if not (1 <= u <= n and 1 <= v <= n):
				self._parseErr(line, "Vertex out of range [1, %d]" % n)
			if u == v:
				self._parseErr(line, "Self-loop")
			if self.graph.has_edge(u - 1, v - 1):
				self._parseWarn(line, "Duplicate edge ignored")
			self.graph.add_edge(u - 1, v - 1)
			nrEdges += 1
		if self._header is None:
			self._parseErr(None, "Missing 'p tw' header")
		if nrEdges != self._header[1]:
			self._parseErr(None, "Header declares %d edges, found %d" % (
				self._header[1], nrEdges))

class TdParser(_PaceParser):
	"""Decomposition file: 's td <#bags> <width+1> <n>', bag lines
	'b <id> <vertices...>' and tree edge lines '<id> <id>'.
	"""

	KIND = "TD"

	def _parse(self):
		bags = {}
		edges = []
		for line in self._contentLines():
			fields = line.text.split()
			if fields[0] == "s":
				if self._header is not None:
					self._parseErr(line, "Duplicate header")
				if len(fields) != 5 or fields[1] != "td":
					self._parseErr(line, "Malformed header, "
						"expected 's td <#bags> <width+1> <n>'")
				header = self._ints(line, fields[2:])
				if any(x < 0 for x in header):
					self._parseErr(line, "Negative count in header")
				self._header = tuple(header)
				continue
			if self._header is None:
				self._parseErr(line, "Data before 's td' header")
			nrBags, maxBag, n = self._header
			if fields[0] == "b":
				ints = self._ints(line, fields[1:])
				if not ints:
					self._parseErr(line, "Bag line without id")
				bagId, vertices = ints[0], ints[1:]
				if not (1 <= bagId <= nrBags):
					self._parseErr(line, "Bag id out of range [1, %d]" % nrBags)
				if bagId - 1 in bags:
					self._parseErr(line, "Duplicate bag %d" % bagId)
				if any(not (1 <= v <= n) for v in vertices):
					self._parseErr(line, "Vertex out of range [1, %d]" % n)
				if len(set(vertices)) != len(vertices):
					self._parseWarn(line, "Repeated vertex in bag")
				if len(set(vertices)) > maxBag:
					self._parseErr(line, "Bag larger than the declared "
						"maximum of %d" % maxBag)
				bags[bagId - 1] = frozenset(v - 1 for v in vertices)
				continue
			if len(fields) != 2:
				self._parseErr(line, "Malformed tree edge line, expected '<id> <id>'")
			a, b = self._ints(line, fields)
			if not (1 <= a <= nrBags and 1 <= b <= nrBags):
				self._parseErr(line, "Bag id out of range [1, %d]" % nrBags)
			edges.append((a - 1, b - 1))
		if self._header is None:
			self._parseErr(None, "Missing 's td' header")
		if len(bags) != self._header[0]:
			self._parseErr(None, "Header declares %d bags, found %d" % (
				self._header[0], len(bags)))
		self.nrVertices = self._header[2]
		try:
			self.decomposition = TreeDecomposition(bags, edges)
		except TreeDecError as e:
			self._parseErr(None, str(e))

def writeGr(graph):
	"""PACE .gr text of a graph over the vertices 0..n-1.
	"""
	edges = sorted(tuple(sorted(e)) for e in graph.edges)
	lines = [ "p tw %d %d" % (graph.number_of_nodes(), len(edges)) ]
	lines.extend("%d %d" % (u + 1, v + 1) for u, v in edges)
	return "\n".join(lines) + "\n"

def writeTd(decomp, nrVertices):
	"""PACE .td text of a decomposition with node ids 0..N-1.
	"""
	nodes = decomp.nodes
	if nodes != list(range(len(nodes))):
		raise PaceError("Decomposition node ids must be 0..%d." % (len(nodes) - 1))
	lines = [ "s td %d %d %d" % (len(nodes), decomp.width + 1, nrVertices) ]
	for node in nodes:
		vertices = " ".join("%d" % (v + 1) for v in sorted(decomp.bags[node]))
		lines.append(("b %d %s" % (node + 1, vertices)).rstrip())
	lines.extend("%d %d" % (a + 1, b + 1)
		     for a, b in sorted(tuple(sorted(e)) for e in decomp.tree.edges))
	return "\n".join(lines) + "\n"
