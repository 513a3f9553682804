"""Exact polynomial vector fields on the fibers of Phi_K."""

from .completeness import (COMPLETE, FAILS, AffineFlowSystem, CompletenessResult,
                           IncompletenessWitness, TypeTableReport, affine_system, certify,
                           completeness_check, generic_forms, incompleteness_witness,
                           verify_type_table)
from .fields import (KINDS, TYPE_KINDS, IndexClash, PolyVectorField, TupleSpec, dx_field,
                     enumerate_type, example_incomplete, is_fiber_preserving, lift_gamma_field,
                     lift_phi_field, partial_field, phi_polys, point_values, ptilde, type1, type2,
                     type3, type4, type5, type6, type7, type8)
from .flows import NotCertified, affine, bound_system, field_flow, flow, gamma_flow, lifted_flow
from .poly import MultiPoly, P, Z, det, param, poly_gcd, zvar
from .span import (AssertRegularFailed, ComplementaryBasis, SingularPoint, SpanReport,
                   builtin_collection, complementary_basis, principal_minor, span_check,
                   u_closed_form, u_matrix, u_matrix_check)
