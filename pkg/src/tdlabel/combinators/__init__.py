from .apex import apex_scheme
from .union import union_scheme
from .skinny import skinny_scheme
from .short import short_scheme
from .compose import compose_full

__all__ = [
    "apex_scheme",
    "union_scheme",
    "skinny_scheme",
    "short_scheme",
    "compose_full",
]
