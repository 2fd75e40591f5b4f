"""Reference values checked by the command-line harness.

Each value carries a provenance string that also appears in JSON reports:
"published" for values stated in the source literature, "oracle" for values
frozen from an independent computation, "definition" for values that follow
immediately from a definition.
"""

CONSTANTS_VERSION = "1"

# The standard Hochschild 1-cycle on the circle, one elementary tensor per line.
SIGMA = ("z^2 ⊗ z^-1 d", "-2*z ⊗ d")

# published: the cocycle evaluates to 1 on the standard cycle
PSI_SIGMA = (1, "published")

# published: integral of the starred symbol form over the circle
EPSILON_SIGMA = (-1, "published")

# oracle: hand symbol calculus, Smbl(z^2) d Smbl(z^-1 d) - 2 Smbl(z) d Smbl(d)
OMEGA_SIGMA = ("-1*dxi", "oracle")
STAR_OMEGA_SIGMA = ("-1*dz/z", "oracle")

# published: the pairing of the two functionals on the cycle is a sign flip
PAIRING = ("psi = -epsilon", "published")

# oracle: direct Chevalley-Eilenberg computations (exterior algebra on primitive classes)
CE_BETTI = {
    "gl1": ((1, 1), "oracle"),
    "gl2": ((1, 1, 0, 1, 1), "oracle"),
    "sl2": ((1, 0, 0, 1), "oracle"),
    "gl3": ((1, 1, 0, 1, 1, 1, 1, 0, 1, 1), "oracle"),
}

# oracle: E1 window totals, weight 0 versus any other weight
E1_TOTAL_WEIGHT_ZERO = (2, "oracle")
E1_TOTAL_OTHER_WEIGHT = (0, "oracle")
E1_WINDOW = {"xi_max": 4, "z_window": (-4, 4), "weights": (-3, -2, -1, 0, 1, 2, 3)}

# published: second Chern character of a line bundle, the circle-fibration integrand
CH2_LINE_BUNDLE = ("1/2*c1^2", "published")
