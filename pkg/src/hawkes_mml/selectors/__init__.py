"""Structure selection methods, discovered by the selector registry."""
