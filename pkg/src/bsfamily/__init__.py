"""Local Bernstein-Sato polynomials of polynomial families, computed by
elimination with standard bases that are generic over a parameter variety."""

from .arith import ParamPoly, PrimeIdealSpec, rational_roots
from .bfunction import BFunction, bernstein
from .division import DivisionConfig
from .errors import (BsFamilyError, DecompositionUnsupported, InternalInconsistency,
                     IrrationalRoots, MalformedCertificate, NotGenericallyRational, ParseError,
                     ResourceError)
from .ncalg import AlgebraSignature, NCMonomial, NCOperator, OrderSpec, weyl_signature
from .parametric import (generic_bernstein, specialization_check, stratify, weak_certificate)
from .polyparse import parse_poly
from .verify import certificate_check

__all__ = [
    "AlgebraSignature", "BFunction", "BsFamilyError", "DecompositionUnsupported", "DivisionConfig",
    "InternalInconsistency", "IrrationalRoots", "MalformedCertificate", "NCMonomial",
    "NCOperator", "NotGenericallyRational", "OrderSpec", "ParamPoly", "ParseError",
    "PrimeIdealSpec", "ResourceError", "bernstein", "certificate_check", "generic_bernstein",
    "parse_poly", "rational_roots", "specialization_check", "stratify", "weak_certificate",
    "weyl_signature",
]
