"""Smoke test for the qecmarkov extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml --release`.
"""

import qecmarkov as qm


def close(a, b, tol=1e-10):
    return abs(a - b) < tol


def main():
    x, z = qm.Pauli("XII"), qm.Pauli("ZII")
    assert not x.commutes(z)
    assert str(x * z) == "-iYII"

    rep3 = qm.StabilizerCode.rep3()
    assert (rep3.n, rep3.k) == (3, 1)
    assert rep3.syndrome_of(x) == "10"
    assert str(rep3.correction("11")) == "IXI"

    u = rep3.encoding_unitary()
    assert abs(u[0b101][0b111]) == 1.0

    noisy = rep3.noisy_recovery(0.1)
    assert noisy.is_cptp()
    one_round = rep3.retraction(noisy)
    assert one_round.distance(qm.Channel.identity(2)) < 1e-12

    q = rep3.polarization(0.1, 10)
    assert close(q[1], 1.0) and q[10] < q[2] < 1.0
    for m in range(11):
        assert close(q[m], qm.circuit_oracle(0.1, m))

    verdict = rep3.verify_theorem1(0.1)
    assert verdict["violated"]

    states, matrix = rep3.transition_matrix(0.1)
    assert states[:2] == ["000", "111"]
    assert close(matrix[0][0], 0.81)
    spectrum = rep3.spectral_summary(0.1)
    assert close(spectrum["spectral_radius"], 1.0)

    five = qm.StabilizerCode.five_qubit()
    s1, s2, logical = five.find_uncorrectable_pair()
    assert logical.weight == 1
    print("qecmarkov smoke test passed")


if __name__ == "__main__":
    main()
