from .scheme import product_scheme

__all__ = ["product_scheme"]
