"""Cyclic identities of Jacobi elliptic functions."""

try:
    from ._cjid import (
        CatalogError,
        DslError,
        EllipticError,
        EvalError,
        Identity,
        complete_K,
        derivative_triple,
        differentiate,
        dn_addition,
        evaluate,
        fit_constants,
        imaginary_translate,
        jacobi,
        jacobi_complex,
        normalize_common_coefficient,
        parse,
        select_eq,
        select_table,
        special_values,
        verify,
    )
except ImportError:  # pragma: no cover - test-tree layout without install
    from _cjid import (
        CatalogError,
        DslError,
        EllipticError,
        EvalError,
        Identity,
        complete_K,
        derivative_triple,
        differentiate,
        dn_addition,
        evaluate,
        fit_constants,
        imaginary_translate,
        jacobi,
        jacobi_complex,
        normalize_common_coefficient,
        parse,
        select_eq,
        select_table,
        special_values,
        verify,
    )

__all__ = [
    "CatalogError",
    "DslError",
    "EllipticError",
    "EvalError",
    "Identity",
    "complete_K",
    "derivative_triple",
    "differentiate",
    "dn_addition",
    "evaluate",
    "fit_constants",
    "imaginary_translate",
    "jacobi",
    "jacobi_complex",
    "normalize_common_coefficient",
    "parse",
    "select_eq",
    "select_table",
    "special_values",
    "verify",
]
