"""Characteristic polynomials and critical exponents of q-polymatroids and rank-metric codes."""

from qcrit.errors import QcritError, ResourceLimit
from qcrit.gf import GF, Subspace, ext_field
from qcrit.lattice import BooleanLattice, SubspaceLattice, make_lattice
from qcrit.qpm import QPolymatroid, from_code, from_matrix_code, from_vector_code
from qcrit.rcode import MatrixCode, VectorCode, load_code, parse_code
from qcrit.wlat import IntPoly, WeightedLattice, char_poly, load_wlat, parse_wlat

__version__ = "0.1.0"
