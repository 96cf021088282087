"""Independent numpy reference values for the C++ test suite.

Run: python3 tests/oracles/oracle.py
Values printed here are frozen into the tests.
"""
import numpy as np

np.set_printoptions(precision=15, suppress=True)

I = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)


def u3(t, p, l):
    return np.array([[np.cos(t / 2), -np.exp(1j * l) * np.sin(t / 2)],
                     [np.exp(1j * p) * np.sin(t / 2), np.exp(1j * (p + l)) * np.cos(t / 2)]])


CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def show(name, v):
    print(f"{name} = {np.real_if_close(v)!r}")


# single spin ground state for B = (1, 1, 1)
B = np.array([1.0, 1.0, 1.0])
H1 = 0.5 * (B[0] * X + B[1] * Y + B[2] * Z)
show("E0_single", np.linalg.eigvalsh(H1)[0])
psi = u3(np.arccos(-1 / np.sqrt(3)), -3 * np.pi / 4, 0) @ np.array([1, 0])
show("E_u3_solution", np.vdot(psi, H1 @ psi).real)

# dimer
H2 = 0.25 * (np.kron(X, X) + np.kron(Y, Y) + np.kron(Z, Z))
show("E0_dimer", np.linalg.eigvalsh(H2)[0])
psi = CX @ np.kron(u3(-np.pi / 2, 0, 0), u3(np.pi, 0, 0)) @ np.array([1, 0, 0, 0])
show("singlet_state", psi)
show("E_singlet_circuit", np.vdot(psi, H2 @ psi).real)
psi = np.kron(u3(0.3, 1.1, 0), u3(np.pi - 0.3, 1.1 + np.pi, 0)) @ np.array([1, 0, 0, 0])
show("E_antiparallel", np.vdot(psi, H2 @ psi).real)

# fixed circuit correlators: H on q1, CNOT, RY(0.7) on q2
psi = np.kron(I, u3(0.7, 0, 0)) @ CX @ np.kron(u3(np.pi / 2, 0, np.pi), I) @ np.array([1, 0, 0, 0])
rho = np.outer(psi, psi.conj())
P = {"X": X, "Y": Y, "Z": Z}
singles = [np.trace(rho @ np.kron(P[a], I)).real for a in "XYZ"] + \
          [np.trace(rho @ np.kron(I, P[a])).real for a in "XYZ"]
pairs = [np.trace(rho @ np.kron(P[a], P[b])).real for a, b in
         ["ZZ", "XX", "YY", "XY", "YX", "XZ", "ZX", "YZ", "ZY"]]
show("bell_ry_correlators", np.array(singles + pairs))

# depolarizing and damping on |1><1|
rho1 = np.diag([0, 1]).astype(complex)
p = 0.2
ks = [np.sqrt(1 - 3 * p / 4) * I, np.sqrt(p / 4) * X, np.sqrt(p / 4) * Y, np.sqrt(p / 4) * Z]
show("depol_on_one", sum(k @ rho1 @ k.conj().T for k in ks))
g = 0.3
ks = [np.array([[1, 0], [0, np.sqrt(1 - g)]]), np.array([[0, np.sqrt(g)], [0, 0]])]
show("ampdamp_on_one", sum(k @ rho1 @ k.conj().T for k in ks))
plus = 0.5 * np.ones((2, 2), dtype=complex)
lam = 0.36
ks = [np.array([[1, 0], [0, np.sqrt(1 - lam)]]), np.array([[0, 0], [0, np.sqrt(lam)]])]
show("phasedamp_on_plus", sum(k @ plus @ k.conj().T for k in ks))

# readout confusion on |01>
f01, f10 = 0.05, 0.1
c = lambda: None
M = np.array([[1 - f01, f10], [f01, 1 - f10]])
show("readout_01", np.kron(M, M) @ np.array([0, 1, 0, 0]))

# network: 3 inputs, 2 hidden
Wh = np.array([[0.1, -0.2], [0.3, 0.4], [-0.5, 0.25]])
Wo = np.array([0.7, -0.3])
s = np.array([0.5, -1.0, 0.25])
h = 1 / (1 + np.exp(-(s @ Wh)))
o = 2 * (1 / (1 + np.exp(-(h @ Wo))) - 0.5)
show("mlp_hidden", h)
show("mlp_output", o)
y = 0.6
d_o = (y - o) * (o + 1) * (0.5 - o / 2)
show("mlp_grad_output", d_o * h)
show("mlp_grad_hidden", np.outer(s, h * (1 - h) * Wo * d_o))

# correction
for c in [-0.68, -0.9, -0.2]:
    sd = 0.75 * c
    show(f"multiplier[{c}]", 0.75 / (-sd))
