# -*- coding: utf-8 -*-
#
# Utility helpers
#
# Copyright (c) 2024 The pypolymatrix authors
#
# Licensed under the terms of the GNU General Public License version 2,
# or (at your option) any later version.
#

from __future__ import division, absolute_import, print_function, unicode_literals

import os
import sys
import time
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

__all__ = [
	"PolymatrixError",
	"DEFAULT_TOL",
	"SUPPORT_THRESHOLD",
	"toFraction",
	"fractionToStr",
	"boolToStr",
	"getEnvInt",
	"getEnvBool",
	"monotonic_time",
	"Stopwatch",
	"WorkBudget",
	"parallelMap",
	"chunked",
	"warningMsg",
]

# Additive tolerance of all equilibrium tests.
DEFAULT_TOL = 1e-9

# Probability above which a pure strategy counts as played.
SUPPORT_THRESHOLD = 1e-12

class PolymatrixError(Exception):
	__slots__ = (
	)

def toFraction(value):
	"""Convert a number or a decimal string into an exact Fraction.
	Floats are converted through their shortest decimal representation,
	so 0.1 becomes 1/10 and not the binary approximation.
	"""
	if isinstance(value, Fraction):
		return value
	if isinstance(value, bool):
		raise ValueError("Boolean is not a number")
	if isinstance(value, int):
		return Fraction(value)
	if isinstance(value, float):
		return Fraction(repr(value))
	return Fraction(str(value).strip())

def fractionToStr(val):
	if val is None:
		return "None"
	val = Fraction(val)
	if val.denominator == 1:
		return "%d" % val.numerator
	return "%d/%d" % (val.numerator, val.denominator)

def boolToStr(val):
	return str(bool(val))

def getEnvInt(name, default = 0):
	try:
		return int(os.getenv(name, "%d" % default))
	except ValueError:
		return default

def getEnvBool(name, default = False):
	return bool(getEnvInt(name, 1 if default else 0))

def warningMsg(pfx, msg):
	print("%sWarning: %s" % (pfx, str(msg)), file=sys.stderr)

# Monotonic time. Returns a float second count.
monotonic_time = getattr(time, "monotonic", time.time)

class Stopwatch(object):
	__slots__ = (
		"__startTime",
	)

	def __init__(self):
		self.start()

	# (Re-)start the time.
	def start(self):
		self.__startTime = monotonic_time()

	# Seconds since the last start.
	def elapsed(self):
		return monotonic_time() - self.__startTime

class WorkBudget(object):
	"""Hard cap on the amount of enumeration work.
	Exceeding the cap raises the given exception class. Nothing is
	ever truncated silently.
	"""

	__slots__ = (
		"__limit",
		"__count",
		"__what",
		"__errorClass",
	)

	def __init__(self, limit, what, errorClass):
		self.__limit = limit
		self.__what = what
		self.__errorClass = errorClass
		self.__count = 0

	@property
	def count(self):
		return self.__count

	def require(self, amount):
		"""Check an up-front size estimate against the cap.
		"""
		if self.__limit >= 0 and amount > self.__limit:
			raise self.__errorClass("%s: %d exceeds the budget of %d." % (
				self.__what, amount, self.__limit))

	def spend(self, amount = 1):
		self.__count += amount
		if self.__limit >= 0 and self.__count > self.__limit:
			raise self.__errorClass("%s: budget of %d exhausted." % (
				self.__what, self.__limit))

def chunked(items, nrChunks):
	"""Split a list into at most nrChunks contiguous slices.
	"""
	items = list(items)
	nrChunks = max(1, min(nrChunks, len(items)))
	size, rest = divmod(len(items), nrChunks)
	chunks, pos = [], 0
	for i in range(nrChunks):
		end = pos + size + (1 if i < rest else 0)
		chunks.append(items[pos : end])
		pos = end
	return chunks

def parallelMap(func, items, threads = 1):
	"""Map func over the contiguous chunks of items.
	Returns the list of per-chunk results in chunk order, so the
	outcome does not depend on the thread schedule.
	"""
	chunks = chunked(items, threads)
	if threads <= 1 or len(chunks) <= 1:
		return [ func(chunk) for chunk in chunks ]
	with ThreadPoolExecutor(max_workers=threads) as executor:
		return list(executor.map(func, chunks))
