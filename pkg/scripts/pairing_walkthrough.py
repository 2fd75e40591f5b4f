"""Step-by-step evaluation of both functionals on the standard Hochschild 1-cycle.

Also shows the Lie 2-chain whose image is homologous to the cycle, and a
boundary that shifts the symbol functional (it is only defined on the
associated graded level).
"""

from fractions import Fraction

from rrkit.constants import SIGMA
from rrkit.forms import hodge_star
from rrkit.hochschild import TensorChain, boundary_solve, chain_parse, epsilon_eval, hoch_b, symbol_one_form
from rrkit.lie import CEChain, lqt_beta, psi_on_hochschild_cycle
from rrkit.weyl import op_parse


def main():
    sigma = chain_parse(SIGMA)
    print("sigma        =", "; ".join(sigma.lines()))
    print("b(sigma)     =", hoch_b(sigma))
    print("Psi(sigma)   =", psi_on_hochschild_cycle(sigma))
    omega = symbol_one_form(sigma)
    print("omega        =", omega)
    print("*omega       =", hodge_star(omega))
    print("epsilon      =", epsilon_eval(sigma))

    lie = CEChain.wedge(op_parse("z^2"), op_parse("z^-1 d")) - CEChain.wedge(op_parse("z"), op_parse("d")) * 2
    beta = lqt_beta(lie)
    x = boundary_solve(beta - sigma, (-2, 2), 2)
    print("beta(lie)    =", "; ".join(beta.lines()))
    print("beta - sigma is a boundary in the window:", x is not None)

    x = TensorChain.tensor(1, "d", "z^2 d", coeff=Fraction(1, 2)) - TensorChain.tensor(1, "z^2 d", "d", coeff=Fraction(1, 2))
    print("b(x)         =", hoch_b(x), " epsilon(b(x)) =", epsilon_eval(hoch_b(x)),
          " Psi(b(x)) =", psi_on_hochschild_cycle(hoch_b(x)))


if __name__ == "__main__":
    main()
