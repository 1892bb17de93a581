from test_game import *
from test_treedec import *
from test_pace import *
from test_formula import *
from test_gadgets import *
from test_constraints import *
from test_dp_solver import *
from test_oracle import *
from test_conf import *
from test_cli import *
