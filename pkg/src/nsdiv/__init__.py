"""Single-pass division: polynomial-corrected piecewise-linear reciprocal."""
