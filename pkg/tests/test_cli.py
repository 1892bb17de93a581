from __future__ import division, absolute_import, print_function, unicode_literals
from pypolymatrix_tstlib import *
initTest(__file__)

from pypolymatrix.cli import *
from pypolymatrix.game import *
from pypolymatrix.treedec import *
from pypolymatrix.reductions import *

import os
import json
import shutil
import tempfile
import networkx as nx


def matchingPennies():
	return PolymatrixGame([ 2, 2 ], [
		(0, 1, [ [ 1, 0 ], [ 0, 1 ] ], [ [ 0, 1 ], [ 1, 0 ] ]),
	]).toExact()

class Test_Cli(TestCase):
	def setUp(self):
		self.tmp = tempfile.mkdtemp(prefix="pypolymatrix-test-")
		self.game = self.path("pennies.json")
		saveGame(self.game, matchingPennies())
		self.uniform = self.path("uniform.json")
		saveProfile(self.uniform, StrategyProfile.uniform(matchingPennies(), exact=True))
		self.pure = self.path("pure.json")
		saveProfile(self.pure, StrategyProfile.pure(matchingPennies(), (0, 0), exact=True))

	def tearDown(self):
		shutil.rmtree(self.tmp)

	def path(self, name):
		return os.path.join(self.tmp, name)

	def write(self, name, text):
		with open(self.path(name), "w") as fd:
			fd.write(text)
		return self.path(name)

	def runCli(self, *argv, **kwargs):
		"""Run the CLI, return (exit code, output document).
		"""
		out = self.path("out.json")
		if os.path.exists(out):
			os.unlink(out)
		code = main([ "--no-meta", "-o", out ] + list(argv))
		doc = None
		if os.path.exists(out):
			with open(out, "r") as fd:
				doc = fd.read() if kwargs.get("raw") else json.loads(fd.read())
		return code, doc

	def test_usage_errors(self):
		self.assertEqual(main([]), EXIT_ERROR)
		self.assertEqual(main([ "bogus" ]), EXIT_ERROR)
		self.assertEqual(main([ "solve" ]), EXIT_ERROR)
		self.assertEqual(main([ "solve", self.path("missing.json") ]), EXIT_ERROR)
		self.assertEqual(main([ "-t", "0", "verify", self.game, self.uniform ]), EXIT_ERROR)
		self.assertEqual(main([ "oracle", self.game, "sample" ]), EXIT_ERROR)

	def test_generate(self):
		formula = self.write("yes.m13sat", cubicYes().toText())
		code, text = self.runCli("generate", formula, "-k", "G", raw=True)
		self.assertEqual(code, EXIT_OK)
		doc = json.loads(text)
		self.assertEqual(doc["manifest"]["label"], "YES")
		self.assertEqual(doc["manifest"]["kind"], "G")
		self.assertEqual(doc["game"]["n"], 12)
		self.assertNotIn("meta", doc)
		# Reruns are byte identical.
		self.assertEqual(self.runCli("generate", formula, "-k", "G", raw=True)[1], text)

		gameFile = self.path("gtilde.json")
		code, doc = self.runCli("generate", formula, "-k", "Gtilde", "-e", "1/2",
				     "-g", gameFile)
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["game_file"], gameFile)
		self.assertEqual(doc["manifest"]["constants"],
				 { "eps" : "1/2", "c" : "5/8", "kappa" : "2/9" })
		self.assertEqual(loadGame(gameFile).actions, (5, ) * 6 + (7, ) * 6)

		bad = self.write("bad.m13sat", "p m13sat 3 1\n1 2 0\n")
		self.assertEqual(self.runCli("generate", bad)[0], EXIT_ERROR)

	def test_solve(self):
		code, text = self.runCli("solve", self.game, "-k", "2", "-e", "0.5", raw=True)
		self.assertEqual(code, EXIT_OK)
		doc = json.loads(text)
		self.assertEqual(doc["status"], "SOLVED")
		self.assertEqual(doc["bound"], 0.75)
		self.assertEqual(doc["profile"], [ [ "1/2", "1/2" ], [ "1", "0" ] ])
		self.assertEqual(doc["k_uniform"], [ [ 0, 1 ], [ 0, 0 ] ])
		self.assertEqual(doc["max_regret"], "1/2")
		self.assertEqual(doc["normalization"], [ { "scale" : "1", "shift" : "0" } ] * 2)
		self.assertEqual(self.runCli("solve", self.game, "-k", "2", "-e", "0.5", raw=True)[1],
				 text)

		code, doc = self.runCli("solve", self.game, "-k", "1", "-e", "0.5")
		self.assertEqual(code, EXIT_NO_CERTIFIED)
		self.assertEqual(doc["status"], "NO_CERTIFIED")
		self.assertNotIn("profile", doc)

	def test_solve_outputs(self):
		witnesses = self.path("witnesses.json")
		profile = self.path("profile.json")
		code, doc = self.runCli("solve", self.game, "-k", "2", "--shadow",
				     "--export-witnesses", witnesses, "-p", profile)
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["diagnostics"]["ledger_violations"], 0)
		with open(witnesses, "r") as fd:
			tables = json.load(fd)
		self.assertEqual([ t["node"] for t in tables ], list(range(len(tables))))
		self.assertEqual(loadProfile(profile)[1].support(), (0, ))

	def test_solve_decomposition(self):
		td = self.write("pennies.td", "s td 1 2 2\nb 1 1 2\n")
		code, doc = self.runCli("solve", self.game, "-k", "2", "--td", td)
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["status"], "SOLVED")
		td = self.write("small.td", "s td 1 1 1\nb 1 1\n")
		self.assertEqual(self.runCli("solve", self.game, "-k", "2", "--td", td)[0], EXIT_ERROR)

	def test_solve_gadget(self):
		formula = self.write("one.m13sat", singleClause().toText())
		gameFile = self.path("g.json")
		self.assertEqual(self.runCli("generate", formula, "-k", "G", "-g", gameFile)[0], EXIT_OK)
		code, doc = self.runCli("solve", gameFile, "-k", "1", "-e", "0.5")
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["status"], "SOLVED")

	def test_solve_constrained(self):
		code, doc = self.runCli("solve", self.game, "-k", "2",
				     "-C", '{"problem": 1, "param": 1}')
		self.assertEqual(code, EXIT_OK)
		self.assertTrue(doc["constraint_check"]["passed"])
		self.assertEqual(doc["constraint"], { "problem" : 1, "param" : 1.0 })

		constraintFile = self.write("c.json", '[{"problem": 4, "param": [1]}]')
		code, doc = self.runCli("solve", self.game, "-k", "2", "-C", constraintFile)
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["k_uniform"][0], [ 1, 1 ])

		self.assertEqual(self.runCli("solve", self.game, "-k", "2",
					  "-C", '{"problem": 5, "param": 0.5}')[0], EXIT_ERROR)
		self.assertEqual(self.runCli("solve", self.game, "-k", "2",
					  "-C", '[{"problem": 1, "param": 1}, {"problem": 9, "param": 1}]')[0],
				 EXIT_ERROR)
		self.assertEqual(self.runCli("solve", self.game, "-k", "2",
					  "-C", '{"problem": 1, "param": 7}')[0], EXIT_ERROR)

	def test_config(self):
		conf = self.write("pm.conf", "[SOLVER]\nk: 2\neps: 0.5\n")
		code = main([ "--no-meta", "-c", conf, "-o", self.path("out.json"),
			      "solve", self.game ])
		self.assertEqual(code, EXIT_OK)
		conf = self.write("bad.conf", "[SOLVER]\nk: -2\n")
		self.assertEqual(main([ "-c", conf, "solve", self.game ]), EXIT_ERROR)

	def test_config_export_witnesses(self):
		conf = self.write("export.conf", "[SOLVER]\nk: 2\nexport_witnesses: yes\n")
		code = main([ "--no-meta", "-c", conf, "-o", self.path("out.json"),
			      "solve", self.game ])
		self.assertEqual(code, EXIT_OK)
		self.assertTrue(os.path.exists(self.path("pennies.witnesses.json")))

	def test_verify(self):
		code, doc = self.runCli("verify", self.game, self.uniform)
		self.assertEqual(code, EXIT_OK)
		self.assertTrue(doc["passed"])
		self.assertEqual(doc["mode"], "ne")
		self.assertEqual(doc["reports"][0]["welfare"], "1")

		code, doc = self.runCli("verify", self.game, self.uniform, self.pure, "-m", "wsne")
		self.assertEqual(code, EXIT_VERIFY_FAILED)
		self.assertEqual([ r["passed"] for r in doc["reports"] ], [ True, False ])
		self.assertEqual(doc["reports"][1]["max_regret"], "1")

		code, doc = self.runCli("verify", self.game, self.pure, "-e", "1")
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["eps"], "1")

	def test_verify_constraint(self):
		code, doc = self.runCli("verify", self.game, self.uniform,
				     "-C", '{"problem": 9, "param": 2}')
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["mode"], "wsne")
		self.assertEqual(doc["value"], 2)

		code, doc = self.runCli("verify", self.game, self.uniform, self.pure, "-e", "1",
				     "-C", '{"problem": 5, "param": 0.5}')
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(len(doc["reports"]), 2)

		code, doc = self.runCli("verify", self.game, self.uniform,
				     "-C", '{"problem": 4, "param": [0]}')
		self.assertEqual(code, EXIT_VERIFY_FAILED)
		self.assertEqual(doc["value"], [ 0, 1 ])
		self.assertFalse(doc["predicate"])

	def test_oracle(self):
		code, doc = self.runCli("oracle", self.game, "pure")
		self.assertEqual((code, doc["count"]), (EXIT_OK, 0))

		code, doc = self.runCli("oracle", self.game, "kuniform", "-k", "2",
				     "-C", '{"problem": 1, "param": 1}')
		self.assertEqual(doc["count"], 1)
		self.assertEqual(doc["results"][0]["k_uniform"], [ [ 0, 1 ], [ 0, 1 ] ])
		self.assertEqual(doc["results"][0]["values"], { "welfare" : 1.0 })

		code, doc = self.runCli("oracle", self.game, "grid", "--grid-step", "0.5")
		self.assertEqual(doc["count"], 1)
		self.assertEqual(doc["results"][0]["profile"], [ [ "1/2", "1/2" ] ] * 2)

		self.assertEqual(self.runCli("oracle", self.game, "pure", "--budget", "3")[0],
				 EXIT_ERROR)

	def test_oracle_support_restriction(self):
		code, doc = self.runCli("oracle", self.game, "kuniform", "-k", "2", "-e", "0.5",
				     "-C", '{"problem": 4, "param": [1]}')
		self.assertEqual(code, EXIT_OK)
		self.assertEqual(doc["count"], 1)
		self.assertEqual(doc["results"][0]["k_uniform"], [ [ 1, 1 ], [ 0, 1 ] ])
		self.assertEqual(self.runCli("oracle", self.game, "kuniform", "-k", "2",
					  "-C", '{"problem": 4, "param": [1]}')[1]["count"], 0)

	def test_oracle_sample(self):
		argv = ("oracle", self.game, "sample", "-P", self.uniform,
			"-k", "10", "--trials", "5", "-e", "0.5")
		code, text = self.runCli(*argv, raw=True)
		self.assertEqual(code, EXIT_OK)
		doc = json.loads(text)
		self.assertFalse(doc["sampling"]["certified"])
		self.assertEqual(doc["sampling"]["trials"], 5)
		self.assertEqual(self.runCli(*argv, raw=True)[1], text)
		self.assertNotEqual(self.runCli("-s", "1", *argv, raw=True)[1], text)

	def test_treewidth(self):
		gr = self.write("cycle.gr", writeGr(nx.cycle_graph(5)))
		code, text = self.runCli("treewidth", gr, raw=True)
		self.assertEqual(code, EXIT_OK)
		decomp = TdParser.fromText(text).decomposition
		self.assertEqual(decomp.width, 2)
		self.assertEqual(validate(decomp, nx.cycle_graph(5)), [])

		code, text = self.runCli("treewidth", self.game, raw=True)
		parser = TdParser.fromText(text)
		self.assertEqual((parser.nrVertices, parser.decomposition.width), (2, 1))

		bad = self.write("bad.gr", "p tw 2 1\n1 3\n")
		self.assertEqual(self.runCli("treewidth", bad)[0], EXIT_ERROR)
