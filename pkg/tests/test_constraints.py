from __future__ import division, absolute_import, print_function, unicode_literals
from pypolymatrix_tstlib import *
initTest(__file__)

from pypolymatrix.game import *
from pypolymatrix.constraints import *
from fractions import Fraction


def matchingPennies():
	return PolymatrixGame([ 2, 2 ], [
		(0, 1, [ [ 1, 0 ], [ 0, 1 ] ], [ [ 0, 1 ], [ 1, 0 ] ]),
	])

class Test_ConstraintCheck(TestCase):
	def test_domains(self):
		for problem, param in ((0, 1), (10, 1), ("x", 1),
				       (1, 0), (1, -1), (2, -0.5),
				       (3, 1), (3, -0.1),
				       (4, []), (4, [ "a" ]), (4, 3),
				       (5, 0), (5, 1.5),
				       (6, 0), (6, 1),
				       (7, 0), (7, 1.5), (8, "x"), (9, True)):
			self.assertRaises(ConstraintError, ConstraintCheck, problem, param)
		self.assertEqual(ConstraintCheck(4, [ 2, 0, 2 ]).param, (0, 2))
		self.assertEqual(ConstraintCheck("7", 3).param, 3)
		self.assertEqual(ConstraintCheck(3, 0).param, 0.0)
		self.assertEqual(ConstraintCheck(5, 1).param, 1.0)
		self.assertEqual(ConstraintCheck(1, 1).equilibriumKind, ConstraintCheck.NE)
		self.assertEqual(ConstraintCheck(2, 0).equilibriumKind, ConstraintCheck.WSNE)
		self.assertEqual(ConstraintCheck(5, 0.5).profileCount, 2)

	def test_game_dependent_domains(self):
		game = matchingPennies()
		for problem, param in ((1, 2.5), (2, 2), (4, [ 2 ]), (7, 5), (8, 3), (9, 3)):
			self.assertRaises(ConstraintError,
					  ConstraintCheck(problem, param).validateFor, game)
		ConstraintCheck(1, 2).validateFor(game)
		ConstraintCheck(7, 4).validateFor(game)

	def test_check_uniform_pennies(self):
		game = matchingPennies()
		s = StrategyProfile.uniform(game, exact=True)
		expect = {
			1 : (1, True, Fraction(1)),
			2 : (1, True, Fraction(1)),
			3 : (0.5, True, Fraction(1, 2)),
			4 : ([ 0 ], False, (0, 1)),
			6 : (0.5, True, Fraction(1, 2)),
			7 : (4, True, 4),
			8 : (2, True, 2),
			9 : (2, True, 2),
		}
		for problem, (param, passed, value) in sorted(expect.items()):
			result = check(game, s, ConstraintCheck(problem, param), 0)
			self.assertTrue(result.equilibriumOk)
			self.assertEqual(result.passed, passed, result.explanation)
			self.assertEqual(result.value, value)
			self.assertEqual(len(result.reports), 1)

	def test_check_equilibrium_fails(self):
		game = matchingPennies()
		s = StrategyProfile.pure(game, (0, 0))
		result = check(game, s, ConstraintCheck(ConstraintCheck.SUPPORT_AT_LEAST, 1), 0.5)
		self.assertTrue(result.predicateOk)
		self.assertFalse(result.equilibriumOk)
		self.assertFalse(result)
		self.assertIn("WSNE: violated", result.explanation)
		# Regret 1 is within eps = 1.
		self.assertTrue(check(game, s, ConstraintCheck(1, 1), 1).passed)

	def test_check_pair(self):
		game = matchingPennies()
		s = StrategyProfile.uniform(game)
		c = ConstraintCheck(ConstraintCheck.TV_APART, 0.5)
		self.assertRaises(ConstraintError, check, game, s, c, 0)
		result = check(game, (s, s), c, 0)
		self.assertEqual(result.value, 0)
		self.assertFalse(result.passed)
		t = StrategyProfile.pure(game, (0, 0))
		result = check(game, (s, t), c, 1)
		self.assertEqual(result.value, 0.5)
		self.assertTrue(result.passed)
		self.assertEqual(len(result.reports), 2)

	def test_json(self):
		c = constraintFromJson({ "problem" : 4, "param" : [ 1, 0 ] })
		self.assertEqual(constraintToJson(c), { "problem" : 4, "param" : [ 0, 1 ] })
		self.assertRaises(ConstraintError, constraintFromJson, { "problem" : 1 })
		self.assertRaises(ConstraintError, constraintFromJson, [ 1, 2 ])

	def test_solver_objective(self):
		self.assertRaises(ConstraintError, solverObjective, ConstraintCheck(5, 0.5))
		self.assertEqual(solverObjective(ConstraintCheck(4, [ 1 ])), (None, (1, )))
		ovd, restriction = solverObjective(ConstraintCheck(2, 1))
		self.assertIsNone(restriction)
		self.assertEqual((ovd.name, ovd.sense), ("welfare", MINIMIZE))
		for problem, param, name, sense in ((1, 1, "welfare", MAXIMIZE),
						    (3, 0.5, "min_payoff", MINIMIZE),
						    (6, 0.5, "max_prob", MINIMIZE),
						    (7, 1, "total_support", MAXIMIZE),
						    (8, 1, "min_support", MAXIMIZE),
						    (9, 1, "player_support", MAXIMIZE)):
			ovd, _ = solverObjective(ConstraintCheck(problem, param))
			self.assertEqual((ovd.name, ovd.sense), (name, sense))

class Test_Ovd(TestCase):
	def allOvds(self):
		return [ ovdWelfare(), ovdMinPayoff(), ovdMaxProb(),
			 ovdTotalSupport(), ovdMinSupport(), ovdPlayerSupport() ]

	def test_evaluate(self):
		game = matchingPennies().toExact()
		s = StrategyProfile([ [ Fraction(1, 4), Fraction(3, 4) ],
				      [ Fraction(1), Fraction(0) ] ])
		self.assertEqual(ovdWelfare().evaluate(game, s), OvdValue(Fraction(1)))
		self.assertEqual(ovdMinPayoff().evaluate(game, s).x, Fraction(1, 4))
		self.assertEqual(ovdMinPayoff().evaluate(game, s, { 0 }),
				 OvdValue(Fraction(1, 4), [ (1, Fraction(3, 4)) ]))
		self.assertEqual(ovdMaxProb().evaluate(game, s).x, Fraction(3, 4))
		self.assertEqual(ovdMaxProb().evaluate(game, s, { 1 }).x, None)
		self.assertEqual(ovdTotalSupport().evaluate(game, s).x, 3)
		self.assertEqual(ovdMinSupport().evaluate(game, s).x, 1)
		self.assertEqual(ovdPlayerSupport().evaluate(game, s).x, 2)
		self.assertEqual(ovdWelfare().evaluate(game, s, ()).x, 0)

	def test_objective_order(self):
		maximize, minimize = ovdWelfare(MAXIMIZE), ovdWelfare(MINIMIZE)
		undefined, low, high = OvdValue(None), OvdValue(1), OvdValue(2)
		self.assertLess(maximize.objective(low), maximize.objective(high))
		self.assertGreater(minimize.objective(low), minimize.objective(high))
		self.assertLess(minimize.objective(undefined), minimize.objective(high))
		self.assertLess(maximize.objective(undefined), maximize.objective(low))
		self.assertRaises(ConstraintError, ovdWelfare, "sideways")

	def test_add_and_merge_laws(self):
		rng = makeRng(31337)
		games = gameCorpus(rng, 6, maxPlayers=5, maxActions=3)
		samples = 1000 if slowTests() else 150
		for ovd in self.allOvds():
			report = ovdValidate(ovd, games, rng, samples, samples)
			self.assertTrue(report.passed, "%r: %s" % (ovd, report.failures))
			self.assertEqual(report.addChecks, samples)
			self.assertEqual(report.mergeChecks, samples)

	def test_broken_ovd_detected(self):
		class BrokenTotal(type(ovdTotalSupport())):
			def merge(self, a, b):
				return OvdValue(a.x + b.x + 1)
		rng = makeRng(1)
		games = [ PolymatrixGame([ 2, 2, 2 ], [
			(0, 1, [ [ 1, 0 ], [ 0, 1 ] ], [ [ 0, 1 ], [ 1, 0 ] ]) ]) ]
		report = ovdValidate(BrokenTotal(), games, rng, 20, 20)
		self.assertFalse(report.passed)
		self.assertTrue(report.failures[0].startswith("merge:"))
		self.assertRaises(ConstraintError, ovdValidate, ovdWelfare(), [], rng)

	def test_broken_ovd_add_detected(self):
		class OffByOneTotal(type(ovdTotalSupport())):
			def add(self, context, v, t, value):
				return OvdValue(value.x + len(t.support()) + 1)
		rng = makeRng(2)
		games = [ PolymatrixGame([ 2, 3, 2 ], [
			(0, 1, [ [ 1, 0, 2 ], [ 0, 1, 1 ] ], [ [ 0, 1 ], [ 1, 0 ], [ 2, 2 ] ]),
			(1, 2, [ [ 1, 0 ], [ 0, 1 ], [ 1, 1 ] ], [ [ 0, 1, 0 ], [ 1, 0, 0 ] ]) ]) ]
		report = ovdValidate(OffByOneTotal(), games, rng, 20, 20)
		self.assertFalse(report.passed)
		self.assertEqual(report.addChecks, 20)
		self.assertTrue(report.failures)
		self.assertTrue(all(f.startswith("add:") for f in report.failures))
		self.assertTrue(ovdValidate(ovdTotalSupport(), games, rng, 20, 20).passed)
