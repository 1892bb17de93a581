# -*- coding: utf-8 -*-
#
# polymatrix command line interface
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

from pypolymatrix.util import *
from pypolymatrix.version import *
from pypolymatrix.conf import *
from pypolymatrix.game import *
from pypolymatrix.constraints import *
from pypolymatrix.dp_solver import *
from pypolymatrix.oracle import *
from pypolymatrix.treedec import *
from pypolymatrix.reductions import *

import os
import sys
import json
import argparse
from fractions import Fraction

__all__ = [
	"EXIT_OK",
	"EXIT_ERROR",
	"EXIT_NO_CERTIFIED",
	"EXIT_VERIFY_FAILED",
	"cmdGenerate",
	"cmdSolve",
	"cmdVerify",
	"cmdOracle",
	"cmdTreewidth",
	"main",
]

EXIT_OK			= 0
EXIT_ERROR		= 1
EXIT_NO_CERTIFIED	= 2
EXIT_VERIFY_FAILED	= 3

PFX = "polymatrix: "

def _num(x):
	if x is None:
		return None
	if isinstance(x, Fraction):
		return fractionToStr(x)
	return float(x)

def _debugMsg(args, msg):
	if args.debug:
		print(PFX + msg, file=sys.stderr)

def _emit(args, doc, timer):
	"""Write the JSON result document. Only the meta section
	holds run dependent data.
	"""
	if not args.no_meta:
		doc["meta"] = {
			"version"	: VERSION_STRING,
			"command"	: args.command,
			"runtime"	: timer.elapsed(),
		}
	text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
	if args.output:
		try:
			with open(args.output, "w", encoding="UTF-8") as fd:
				fd.write(text)
		except (IOError, UnicodeError) as e:
			raise PolymatrixError("Failed to write '%s': %s" % (
				args.output, str(e)))
	else:
		sys.stdout.write(text)

def _loadConstraint(text):
	"""Inline JSON or the name of a JSON file.
	"""
	text = text.strip()
	if not text.startswith("{") and not text.startswith("["):
		try:
			with open(text, "r", encoding="UTF-8") as fd:
				text = fd.read()
		except (IOError, UnicodeError) as e:
			raise ConstraintError("Failed to read constraint file '%s': %s" % (
				text, str(e)))
	try:
		spec = json.loads(text)
	except ValueError as e:
		raise ConstraintError("Invalid constraint JSON: %s" % str(e))
	if isinstance(spec, list):
		if len(spec) != 1:
			raise ConstraintError("Combined constraints are not supported.")
		spec = spec[0]
	return constraintFromJson(spec)

def _loadGame(filename):
	if filename.endswith(".gr"):
		raise GameError("'%s' is a graph, not a game." % filename)
	return loadGame(filename)

def _records(records):
	return [ { "scale" : _num(r.scale), "shift" : _num(r.shift) } for r in records ]

def cmdGenerate(args, conf):
	formula = Formula.fromFile(args.formula)
	if args.kind == LabeledGame.KIND_G:
		labeled = buildG(formula)
	else:
		constants = conf.makeGadgetConstants(eps=args.eps)
		if args.kind == LabeledGame.KIND_GPRIME:
			labeled = buildGprime(formula, constants)
		else:
			labeled = buildGtilde(formula, constants)
	_debugMsg(args, "%s: %d players, label %s" % (
		labeled.kind, labeled.game.n, labeled.label))
	doc = { "manifest" : labeled.labelManifest() }
	if args.game_output:
		saveGame(args.game_output, labeled.exactGame)
		doc["game_file"] = args.game_output
	else:
		doc["game"] = gameToJson(labeled.exactGame)
	return doc, EXIT_OK

def _decomposition(args, game):
	if args.td:
		parser = TdParser.fromFile(args.td, debug=bool(args.debug))
		if parser.nrVertices != game.n:
			raise TreeDecError("Decomposition covers %d vertices, the game "
					   "has %d players." % (parser.nrVertices, game.n))
		return parser.decomposition
	width, decomp = smallExactTreewidth(game.graph())
	_debugMsg(args, "exact treewidth %d" % width)
	return decomp

def cmdSolve(args, conf):
	game = _loadGame(args.game)
	constraint, ovd, restriction = None, None, None
	if args.constraint:
		constraint = _loadConstraint(args.constraint)
		constraint.validateFor(game)
		ovd, restriction = solverObjective(constraint)
	cfg = conf.makeSolverConfig(constraint=ovd,
				    supportRestriction=restriction,
				    eps=args.eps,
				    k=args.k)
	if args.shadow:
		cfg.shadow = True
	cfg.threads = args.threads
	decomp = _decomposition(args, game)
	if cfg.constrained or cfg.supportRestriction is not None:
		result = solveConstrained(game, decomp, cfg)
	else:
		result = solve(game, decomp, cfg)

	doc = {
		"status"	: result.status,
		"eps"		: cfg.eps,
		"bound"		: 1.5 * cfg.eps,
		"diagnostics"	: result.diagnostics(),
		"normalization"	: _records(result.records),
	}
	witnessFile = args.export_witnesses
	if not witnessFile and conf.exportWitnesses:
		witnessFile = os.path.splitext(args.game)[0] + ".witnesses.json"
	if witnessFile:
		normalized = normalize(game)[0].toFloat()
		solver = DpSolver(normalized, result.nice, cfg)
		data = witnessTablesToJson(result.tables, result.nice, solver)
		try:
			with open(witnessFile, "w", encoding="UTF-8") as fd:
				json.dump(data, fd, indent=1, sort_keys=True)
				fd.write("\n")
		except (IOError, UnicodeError) as e:
			raise SolverError("Failed to write '%s': %s" % (
				witnessFile, str(e)))
		doc["witness_file"] = witnessFile
	if not result.solved:
		return doc, EXIT_NO_CERTIFIED

	profile = StrategyProfile.fromKUniform(game, result.kProfile, exact=game.exact)
	normalized = normalize(game)[0]
	ok, report = isEpsNE(normalized, profile, 1.5 * cfg.eps, cfg.tol)
	doc["profile"] = profileToJson(
		StrategyProfile.fromKUniform(game, result.kProfile, exact=True))
	doc["k_uniform"] = [ list(ks.multiset) for ks in result.kProfile ]
	doc["max_regret"] = _num(report.maxRegret)
	doc["max_regret_original"] = _num(regretReport(game, profile).maxRegret)
	doc["regrets"] = report.toJson()
	if constraint is not None:
		outcome = check(game, profile, constraint, 1.5 * cfg.eps, cfg.tol)
		doc["constraint"] = constraintToJson(constraint)
		doc["constraint_check"] = {
			"passed"	: outcome.passed,
			"predicate"	: outcome.predicateOk,
			"explanation"	: outcome.explanation,
		}
	if args.profile_output:
		saveProfile(args.profile_output, profile)
	return doc, (EXIT_OK if ok else EXIT_VERIFY_FAILED)

def cmdVerify(args, conf):
	game = _loadGame(args.game)
	profiles = [ loadProfile(f) for f in args.profiles ]
	for profile in profiles:
		profile.validateFor(game)
	doc = { "eps" : _num(args.eps) }
	if args.constraint:
		constraint = _loadConstraint(args.constraint)
		outcome = check(game, profiles, constraint, args.eps)
		doc["mode"] = constraint.equilibriumKind.lower()
		doc["constraint"] = constraintToJson(constraint)
		doc["passed"] = outcome.passed
		doc["predicate"] = outcome.predicateOk
		doc["value"] = (list(outcome.value) if isinstance(outcome.value, tuple)
				else _num(outcome.value))
		doc["explanation"] = outcome.explanation
		doc["reports"] = [ { "max_regret"	: _num(r.maxRegret),
				     "max_ws_regret"	: _num(r.maxWsRegret),
				     "players"		: r.toJson() }
				   for r in outcome.reports ]
		passed = outcome.passed
	else:
		verify = isEpsNE if args.mode == "ne" else isEpsWSNE
		doc["mode"] = args.mode
		doc["reports"] = []
		passed = True
		for profile in profiles:
			ok, report = verify(game, profile, args.eps)
			passed = passed and ok
			doc["reports"].append({
				"passed"	: ok,
				"max_regret"	: _num(report.maxRegret),
				"max_ws_regret"	: _num(report.maxWsRegret),
				"welfare"	: _num(socialWelfare(game, profile)),
				"players"	: report.toJson(),
			})
		doc["passed"] = passed
	return doc, (EXIT_OK if passed else EXIT_VERIFY_FAILED)

def cmdOracle(args, conf):
	game = _loadGame(args.game)
	budget = conf.oracleBudget if args.budget is None else args.budget
	debug = conf.debug
	if args.oracle == "pure":
		hits = enumeratePureNe(game, args.eps, budget=budget, debug=debug)
	elif args.oracle == "kuniform":
		constraints, restriction = (), None
		if args.constraint:
			constraint = _loadConstraint(args.constraint)
			constraint.validateFor(game)
			ovd, restriction = solverObjective(constraint)
			if ovd is not None:
				constraints = (ovd, )
		hits = enumerateKUniformNe(game, args.k, args.eps, budget=budget,
					   constraints=constraints,
					   supportRestriction=restriction, debug=debug)
	elif args.oracle == "grid":
		step = conf.gridStep if args.grid_step is None else args.grid_step
		hits = gridSearchWsne(game, args.eps, step, budget=budget, debug=debug)
	else:
		profile = loadProfile(args.profile)
		trials = conf.trials if args.trials is None else args.trials
		report = samplingCheck(game, profile, args.k, trials,
				       eps=args.eps, seed=args.seed, threads=args.threads)
		return { "sampling" : report.toJson() }, EXIT_OK
	return { "count" : len(hits), "results" : hitsToJson(hits) }, EXIT_OK

def cmdTreewidth(args, conf):
	if args.input.endswith(".gr"):
		graph = GrParser.fromFile(args.input, debug=bool(args.debug)).graph
	else:
		graph = loadGame(args.input).graph()
	width, decomp = smallExactTreewidth(graph)
	text = writeTd(decomp, graph.number_of_nodes())
	if args.output:
		try:
			with open(args.output, "w", encoding="UTF-8") as fd:
				fd.write(text)
		except (IOError, UnicodeError) as e:
			raise PolymatrixError("Failed to write '%s': %s" % (
				args.output, str(e)))
	else:
		sys.stdout.write(text)
	return None, EXIT_OK

def _buildParser():
	p = argparse.ArgumentParser(
		prog="polymatrix",
		description="Approximate and constrained equilibria of "
			    "polymatrix games on bounded treewidth graphs.")
	p.add_argument("-c", "--config", metavar="FILE",
		       help="Configuration file.")
	p.add_argument("-D", "--debug", action="count", default=0,
		       help="Enable debug messages on stderr. Repeat to increase the level.")
	p.add_argument("--no-meta", action="store_true",
		       help="Omit version and runtime from the output.")
	p.add_argument("-s", "--seed", type=int, default=None,
		       help="Random seed. (default: from configuration, 0)")
	p.add_argument("-t", "--threads", type=int, default=None,
		       help="Worker threads. (default: from configuration, 1)")
	p.add_argument("-o", "--output", metavar="FILE",
		       help="Write the result to FILE instead of stdout.")
	sub = p.add_subparsers(dest="command")

	g = sub.add_parser("generate", help="Build a gadget game from a formula.")
	g.add_argument("formula", help="Monotone 1-in-3 SAT formula file.")
	g.add_argument("-k", "--kind", default=LabeledGame.KIND_GPRIME,
		       choices=(LabeledGame.KIND_G, LabeledGame.KIND_GPRIME,
				LabeledGame.KIND_GTILDE),
		       help="Gadget kind. (default: %(default)s)")
	g.add_argument("-e", "--eps", type=Fraction, default=None,
		       help="Gadget eps in (0, 1). (default: from configuration)")
	g.add_argument("-g", "--game-output", metavar="FILE",
		       help="Write the game to FILE instead of embedding it.")

	s = sub.add_parser("solve", help="Find a 1.5 eps-NE by dynamic programming.")
	s.add_argument("game", help="Game JSON file.")
	s.add_argument("--td", metavar="FILE",
		       help="PACE tree decomposition. (default: exact search)")
	s.add_argument("-e", "--eps", type=float, default=None,
		       help="Approximation eps. (default: from configuration)")
	s.add_argument("-k", "--k", type=int, default=None,
		       help="Support multiset size. (default: from configuration or k bound)")
	s.add_argument("-C", "--constraint", metavar="JSON",
		       help="Constraint as inline JSON or file.")
	s.add_argument("--shadow", action="store_true",
		       help="Track exact payoffs and report the rounding ledger.")
	s.add_argument("--export-witnesses", metavar="FILE",
		       help="Write the witness tables to FILE.")
	s.add_argument("-p", "--profile-output", metavar="FILE",
		       help="Also write the profile to FILE.")

	v = sub.add_parser("verify", help="Check profiles against a game.")
	v.add_argument("game", help="Game JSON file.")
	v.add_argument("profiles", nargs="+", help="Profile JSON file(s).")
	v.add_argument("-e", "--eps", type=Fraction, default=Fraction(0),
		       help="Equilibrium eps. (default: 0)")
	v.add_argument("-m", "--mode", choices=("ne", "wsne"), default="ne",
		       help="Equilibrium kind. (default: %(default)s)")
	v.add_argument("-C", "--constraint", metavar="JSON",
		       help="Constraint as inline JSON or file.")

	o = sub.add_parser("oracle", help="Brute force equilibrium oracles.")
	o.add_argument("game", help="Game JSON file.")
	o.add_argument("oracle", choices=("pure", "kuniform", "grid", "sample"))
	o.add_argument("-e", "--eps", type=float, default=None,
		       help="Equilibrium eps. (default: 0, sampling: none)")
	o.add_argument("-k", "--k", type=int, default=2,
		       help="Multiset size. (default: %(default)s)")
	o.add_argument("--grid-step", type=float, default=None,
		       help="Grid step. (default: from configuration)")
	o.add_argument("--budget", type=int, default=None,
		       help="Work budget. (default: from configuration)")
	o.add_argument("--trials", type=int, default=None,
		       help="Sampling trials. (default: from configuration)")
	o.add_argument("-P", "--profile", metavar="FILE",
		       help="Profile to sample from.")
	o.add_argument("-C", "--constraint", metavar="JSON",
		       help="Constraint whose value is reported per k-uniform hit. "
			    "Problem 4 restricts the strategies of player 0.")

	w = sub.add_parser("treewidth", help="Exact tree decomposition as PACE .td.")
	w.add_argument("input", help="Game JSON file or PACE .gr graph.")
	return p

_COMMANDS = {
	"generate"	: cmdGenerate,
	"solve"		: cmdSolve,
	"verify"	: cmdVerify,
	"oracle"	: cmdOracle,
	"treewidth"	: cmdTreewidth,
}

def main(argv=None):
	parser = _buildParser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return EXIT_ERROR if e.code else EXIT_OK
	if not args.command:
		parser.print_usage(sys.stderr)
		return EXIT_ERROR
	timer = Stopwatch()
	try:
		conf = PmConf.fromFile(args.config) if args.config else PmConf.defaults()
		conf.debug += args.debug
		args.debug = conf.debug
		args.seed = conf.seed if args.seed is None else args.seed
		args.threads = conf.threads if args.threads is None else args.threads
		if args.threads < 1:
			raise PolymatrixError("Invalid thread count %d." % args.threads)
		if args.command == "oracle":
			if args.eps is None and args.oracle != "sample":
				args.eps = 0.0
			if args.oracle == "sample" and not args.profile:
				raise OracleError("The sample oracle needs --profile.")
		doc, code = _COMMANDS[args.command](args, conf)
		if doc is not None:
			_emit(args, doc, timer)
		return code
	except PolymatrixError as e:
		print(PFX + "error: " + str(e), file=sys.stderr)
		return EXIT_ERROR
