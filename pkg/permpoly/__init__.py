from .field import FieldElement, FieldTower, make_tower
from .poly import LinearizedPoly, SubfieldPoly
from .symm import SymmetricKind
from .construct import Thm3Instance, Thm21Instance, Thm41Instance
from .oracle import AuditReport, PermutationReport, audit_equivalence, is_permutation
