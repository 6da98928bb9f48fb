from __future__ import annotations
from typing import Any, Callable
from ctp.tree.path import Path, PrefixFunctional

__all__ = ["transport_iso"]

def transport_iso(forward: PrefixFunctional, backward: PrefixFunctional,
                  procedure: Callable[..., Any]) -> Callable[..., Any]:
    """
    Conjugate a procedure on the source presentation by an isomorphism of
    presentations.

    Arguments
    ---------
    * forward: PrefixFunctional
        Unary functional from source paths to target paths.
    * backward: PrefixFunctional
        Its inverse, from target paths to source paths.
    * procedure: Callable[..., Any]
        Procedure taking source paths. Returned paths (alone, or inside a
        tuple, list or dict) are mapped forward, any other result such as a
        decision is returned as is.

    Returns
    -------
    * Callable[..., Any]
        The same procedure acting on target paths.
    """
    def convert(res: Any) -> Any:
        if isinstance(res, Path):
            return forward(res)
        if isinstance(res, (tuple, list)):
            return type(res)(convert(r) for r in res)
        if isinstance(res, dict):
            return {k: convert(v) for (k, v) in res.items()}
        return res

    def target_procedure(*paths: Path, **kwargs) -> Any:
        return convert(procedure(*[backward(p) for p in paths], **kwargs))

    return target_procedure
