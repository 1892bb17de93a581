from __future__ import division, absolute_import, print_function, unicode_literals
from pypolymatrix_tstlib import *
initTest(__file__)

from pypolymatrix.treedec import *
import networkx as nx


class Test_TreeDecomposition(TestCase):
	def test_elimination_order(self):
		graph = nx.path_graph(3)
		decomp = TreeDecomposition.fromEliminationOrder(graph, [ 0, 1, 2 ])
		self.assertEqual(decomp.bags, { 0 : frozenset([ 0, 1 ]),
						 1 : frozenset([ 1, 2 ]),
						 2 : frozenset([ 2 ]) })
		self.assertEqual(decomp.width, 1)
		self.assertTrue(decomp.isTree())
		self.assertEqual(validate(decomp, graph), [])
		self.assertRaises(TreeDecError, TreeDecomposition.fromEliminationOrder,
				  graph, [ 0, 1 ])

	def test_elimination_order_disconnected(self):
		graph = nx.Graph()
		graph.add_nodes_from(range(4))
		graph.add_edge(0, 1)
		decomp = TreeDecomposition.fromEliminationOrder(graph, [ 0, 1, 2, 3 ])
		self.assertTrue(decomp.isTree())
		self.assertEqual(validate(decomp, graph), [])

	def test_violations(self):
		triangle = nx.complete_graph(3)
		decomp = TreeDecomposition([ { 0, 1 }, { 1, 2 } ], [ (0, 1) ])
		self.assertEqual(validate(decomp, triangle), [ "edge (0,2) uncovered" ])

		graph = nx.Graph()
		graph.add_nodes_from(range(3))
		decomp = TreeDecomposition([ { 0 }, { 1 }, { 0 } ], [ (0, 1), (1, 2) ])
		self.assertEqual(validate(decomp, graph), [
			"vertex 2 uncovered",
			"bags containing vertex 0 are not connected",
		])

		decomp = TreeDecomposition([ { 0 }, { 1 }, { 2 } ], [ (0, 1) ])
		self.assertEqual(validate(decomp, graph), [ "decomposition tree is not a tree" ])

		decomp = TreeDecomposition([ { 0, 1, 2, 7 } ])
		self.assertEqual(validate(decomp, graph), [ "bag 0 contains unknown vertex 7" ])

	def test_invalid_construction(self):
		self.assertRaises(TreeDecError, TreeDecomposition, [ { 0 } ], [ (0, 1) ])
		self.assertRaises(TreeDecError, TreeDecomposition, [ { 0 } ], [ (0, 0) ])
		self.assertRaises(TreeDecError, TreeDecomposition, [ { 0 } ], root=3)

	def test_canonical_root(self):
		decomp = TreeDecomposition([ { 2, 3 }, { 1, 5 }, { 1, 2 } ], [ (0, 2), (1, 2) ])
		self.assertEqual(decomp.canonicalRoot(), 2)
		self.assertRaises(TreeDecError, TreeDecomposition([]).canonicalRoot)

	def test_small_exact_treewidth(self):
		for graph, width in ((nx.path_graph(5), 1),
				     (nx.cycle_graph(5), 2),
				     (nx.complete_graph(4), 3),
				     (nx.star_graph(6), 1),
				     (nx.empty_graph(3), 0),
				     (nx.grid_2d_graph(3, 3), 3)):
			graph = nx.convert_node_labels_to_integers(graph)
			w, decomp = smallExactTreewidth(graph)
			self.assertEqual(w, width)
			self.assertEqual(decomp.width, width)
			self.assertEqual(validate(decomp, graph), [])
		self.assertEqual(smallExactTreewidth(nx.Graph())[0], -1)
		self.assertRaises(TreeDecError, smallExactTreewidth,
				  nx.path_graph(SMALL_TREEWIDTH_LIMIT + 1))

	def test_small_exact_treewidth_deterministic(self):
		graph = nx.cycle_graph(6)
		w1, d1 = smallExactTreewidth(graph)
		w2, d2 = smallExactTreewidth(graph)
		self.assertEqual(d1.bags, d2.bags)
		self.assertEqual(sorted(d1.tree.edges), sorted(d2.tree.edges))

class Test_NiceTreeDecomposition(TestCase):
	def checkNice(self, graph, decomp):
		nice = toNice(decomp)
		self.assertEqual(validateNice(nice, graph), [])
		self.assertEqual(nice.width, max(decomp.width, 0))
		counts = nice.kindCounts()
		self.assertEqual(counts[NiceNode.FORGET], graph.number_of_nodes())
		self.assertEqual(forgetCounts(nice)[nice.root], counts[NiceNode.FORGET])
		self.assertEqual(nice[nice.root].bag, ())
		return nice

	def test_path(self):
		graph = nx.path_graph(4)
		decomp = TreeDecomposition.fromEliminationOrder(graph, range(4))
		nice = self.checkNice(graph, decomp)
		for p in range(4):
			self.assertEqual(nice[nice.forgetNode(p)].player, p)
		for node in nice:
			for c in node.children:
				self.assertLess(c, node.nodeId)

	def test_join(self):
		graph = starGraph(4)
		decomp = TreeDecomposition([ { 0 }, { 0, 1 }, { 0, 2 }, { 0, 3 } ],
					   [ (0, 1), (0, 2), (0, 3) ])
		nice = self.checkNice(graph, decomp)
		self.assertEqual(nice.kindCounts()[NiceNode.JOIN], 2)
		self.assertEqual(nice.kindCounts()[NiceNode.START], 3)

	def test_empty(self):
		nice = toNice(TreeDecomposition([]))
		self.assertEqual(len(nice), 1)
		self.assertEqual(nice[0].kind, NiceNode.START)
		self.assertEqual(validateNice(nice, nx.Graph()), [])

	def test_single_bag(self):
		graph = nx.complete_graph(3)
		nice = self.checkNice(graph, TreeDecomposition([ { 0, 1, 2 } ]))
		self.assertEqual(len(nice), 4)

	def test_broken_nice(self):
		nodes = [ NiceNode(0, NiceNode.START, (0, 1)),
			  NiceNode(1, NiceNode.FORGET, (1, ), 1, (0, )),
			  NiceNode(2, NiceNode.FORGET, (), 1, (1, )) ]
		violations = validateNice(NiceTreeDecomposition(nodes, 2))
		self.assertIn("forget node 1: bag is not child - 1", violations)
		self.assertIn("player 1 is forgotten 2 times", violations)

	def test_roundtrip_tree_decomposition(self):
		graph = nx.cycle_graph(5)
		w, decomp = smallExactTreewidth(graph)
		nice = toNice(decomp)
		back = nice.toTreeDecomposition()
		self.assertEqual(validate(back, graph), [])
		self.assertEqual(back.width, w)

	def test_random_decompositions(self):
		rng = makeRng(4711)
		for _ in range(100 if slowTests() else 30):
			graph, decomp = randomDecomposition(rng)
			self.assertEqual(validate(decomp, graph), [])
			nice = self.checkNice(graph, decomp)
			self.assertLessEqual(len(nice), 4 * len(decomp) + 2 * decomp.width)

	def test_random_elimination_orders(self):
		rng = makeRng(1848)
		wideSteps = 0
		for _ in range(100 if slowTests() else 30):
			graph, decomp = randomEliminationDecomposition(rng)
			self.assertEqual(validate(decomp, graph), [])
			nice = self.checkNice(graph, decomp)
			for node in nice:
				if node.kind == NiceNode.JOIN:
					for c in node.children:
						self.assertEqual(nice[c].bag, node.bag)
			wideSteps += sum(1 for u, v in decomp.tree.edges
					 if len(decomp.bags[u] ^ decomp.bags[v]) > 1)
		self.assertGreater(wideSteps, 0)
