"""Mod-p Hecke algebras and principal series of the metaplectic double cover of SL_2.

Modules:

* ``arith`` -- finite-precision p-adic fields and the tame Hilbert symbol.
* ``metaplectic`` -- the double cover, its cocycle and the splittings over K and K'.
* ``cosets`` -- canonical coset representatives, decompositions and double-coset counts.
* ``weights`` -- the weight modules V_r and the maps between them.
* ``hecke`` -- sections, Hecke operators, the Satake transform and free bases.
* ``characters`` -- Weil indices, genuine torus characters and principal-series parameters.
* ``verify`` / ``cli`` -- verification suites and the command line.
"""

from .arith import FieldElement, PadicField, hilbert_symbol, padic_field
from .config import RunConfig

__version__ = "0.1.0"

__all__ = ["FieldElement", "PadicField", "RunConfig", "hilbert_symbol", "padic_field", "__version__"]
