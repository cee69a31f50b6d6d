from .generators import (
    gen_decomposed_instance,
    gen_ktree,
    gen_product_instance,
    gen_union_instance,
)

__all__ = [
    "gen_ktree",
    "gen_product_instance",
    "gen_union_instance",
    "gen_decomposed_instance",
]
