from __future__ import division, absolute_import, print_function, unicode_literals
from pypolymatrix_tstlib import *
initTest(__file__)

from pypolymatrix.conf import *
from pypolymatrix.constraints import *
from fractions import Fraction
from io import StringIO


CONF_TEXT = """
[POLYMATRIX]
debug: 1
threads: 2
seed: 42

[SOLVER]
eps: 0.4
k: 3
shadow: yes

[ORACLE]
budget: 5000
grid_step: 0.5
trials: 20

[GADGET]
eps: 0.3
c: 3/4
"""

class Test_PmConf(TestCase):
	def test_defaults(self):
		conf = PmConf.defaults()
		self.assertEqual(conf.debug, 0)
		self.assertEqual(conf.threads, 1)
		self.assertEqual(conf.solverEps, 0.5)
		self.assertEqual(conf.solverK, 0)
		self.assertFalse(conf.solverShadow)
		self.assertEqual(conf.oracleBudget, 10000000)
		self.assertIsNone(conf.gadgetC)
		cfg = conf.makeSolverConfig(k=2)
		self.assertEqual((cfg.eps, cfg.k, cfg.threads), (0.5, 2, 1))
		self.assertIsNone(conf.makeSolverConfig().k)
		self.assertEqual(conf.makeGadgetConstants().c, Fraction(5, 8))

	def test_parse(self):
		conf = PmConf(StringIO(CONF_TEXT), "test.conf")
		self.assertEqual((conf.debug, conf.threads, conf.seed), (1, 2, 42))
		self.assertEqual((conf.solverEps, conf.solverK), (0.4, 3))
		self.assertTrue(conf.solverShadow)
		self.assertEqual((conf.oracleBudget, conf.gridStep, conf.trials), (5000, 0.5, 20))
		self.assertEqual(conf.gadgetC, Fraction(3, 4))

		cfg = conf.makeSolverConfig(constraint=ovdWelfare(), eps=0.8)
		self.assertEqual((cfg.eps, cfg.k, cfg.threads, cfg.debug), (0.8, 3, 2, 1))
		self.assertTrue(cfg.shadow)
		self.assertTrue(cfg.constrained)
		constants = conf.makeGadgetConstants()
		self.assertEqual((constants.eps, constants.c), (Fraction(3, 10), Fraction(3, 4)))

	def test_invalid(self):
		for text in ("[POLYMATRIX]\nthreads: 0\n",
			     "[POLYMATRIX]\ndebug: x\n",
			     "[SOLVER]\neps: 0\n",
			     "[SOLVER]\neps: 1.5\n",
			     "[SOLVER]\nk: -1\n",
			     "[SOLVER]\nshadow: maybe\n",
			     "[ORACLE]\nbudget: 0\n",
			     "[ORACLE]\ngrid_step: 2\n",
			     "[GADGET]\neps: 1\n",
			     "[GADGET]\nc: 1/0\n",
			     "[GADGET]\nc: half\n",
			     "no section\n"):
			self.assertRaises(PmConfError, PmConf, StringIO(text))

	def test_gadget_c_out_of_range(self):
		from pypolymatrix.reductions import ReductionError
		conf = PmConf(StringIO("[GADGET]\neps: 0.5\nc: 1/8\n"))
		self.assertRaises(ReductionError, conf.makeGadgetConstants)

	def test_file(self):
		import os, tempfile
		with tempfile.TemporaryDirectory() as tmp:
			path = os.path.join(tmp, "pypolymatrix.conf")
			with open(path, "w") as fd:
				fd.write(CONF_TEXT)
			self.assertEqual(PmConf.fromFile(path).seed, 42)
			self.assertRaises(PmConfError, PmConf.fromFile,
					  os.path.join(tmp, "missing.conf"))

	def test_shipped_example(self):
		import os
		path = os.path.join(os.path.dirname(__file__), "..", "misc", "pypolymatrix.conf")
		conf = PmConf.fromFile(path)
		self.assertEqual((conf.solverEps, conf.solverK, conf.gridStep), (0.5, 2, 0.25))
		self.assertFalse(conf.exportWitnesses)
		self.assertIsNone(conf.gadgetC)
