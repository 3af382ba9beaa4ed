# Regenerates frozen_values.hpp from mpmath at 40 digits.
#   python3 generate_frozen.py > frozen_values.hpp
import mpmath as mp

mp.mp.dps = 40


def c(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 20, min_fixed=-mp.inf, max_fixed=mp.inf), mp.nstr(z.imag, 20, min_fixed=-mp.inf, max_fixed=mp.inf))


def r(x):
    return mp.nstr(mp.mpf(x), 20, min_fixed=-mp.inf, max_fixed=mp.inf)


print("#pragma once\n// generated by generate_frozen.py (mpmath, 40 digits); do not edit\n")
print("#include <complex>\n\nnamespace frozen {\n\nusing cplx = std::complex<double>;\n")

print("struct LogGammaCase {\n  cplx z, value;\n};")
pts = [(3, 4), (-2.5, 0.3), (-7.3, -2.1), (0.1, 0.01), (0.5, 0), (1e-3, 2e-3), (25, -40), (-0.5, 1e-8),
       (150, 3), (2, -300), (-40.25, 0.5), (0.75, -0.25), (6, 0), (-3.5, -1e-3)]
print("inline const LogGammaCase log_gamma_cases[] = {")
for p in pts:
    z = mp.mpc(*p)
    print("    {%s, %s}," % (c(z), c(mp.loggamma(z))))
print("};\n")

print("struct Hyp2F1Case {\n  cplx a, b, c, z, value;\n};")
cases = [((0.3, 0), (0.7, 0), (1.5, 0), (-3, 0)),
         ((0.5, 1), (0.5, -1), (1.5, 0), (-10, 0)),
         ((0.25, 2), (0.25, -2), (0.75, 0), (-50, 0)),
         ((0.5, 0), (0.5, 0), (1, 0), (-0.95, 0)),
         ((0.25, 0), (0.25, 0), (0.75, 0), (-200, 0)),
         ((0.75, 0.5), (0.75, -0.5), (1.25, 0), (-1e4, 0)),
         ((1.2, 0), (0.4, 0), (2.3, 0), (0.9, 0)),
         ((1, 3), (1, -3), (2, 0), (-0.5, 0)),
         ((0.5, 0), (1.5, 0), (2, 0), (-7, 0)),
         ((1, 0), (1, 0), (2, 0), (-3, 0)),
         ((0.3, 0), (0.6, 0), (0.9, 0), (0.4, 0.3))]
print("inline const Hyp2F1Case hyp2f1_cases[] = {")
for a, b, cc, z in cases:
    A, B, C, Z = mp.mpc(*a), mp.mpc(*b), mp.mpc(*cc), mp.mpc(*z)
    print("    {%s, %s, %s, %s, %s}," % (c(A), c(B), c(C), c(Z), c(mp.hyp2f1(A, B, C, Z))))
print("};\n")


# rank-one Jacobi function phi for roots ±s (k1), ±2s (k2)
def jacobi(k1, k2, s, lam, x):
    rho = mp.mpf(k1) + 2 * k2
    return mp.hyp2f1(rho / 2 + lam / s, rho / 2 - lam / s, k1 + k2 + mp.mpf(1) / 2, -mp.sinh(s * x / 2) ** 2)


print("struct JacobiCase {\n  double k1, k2, s;\n  cplx lambda;\n  double x;\n  cplx value;\n};")
jc = [(0.5, 0, mp.sqrt(2), (0, 7.3), 1.5), (1, 0, mp.sqrt(2), (0.4, -3), 2.0), (0.5, 1, 1, (0.3, 5), 3.1),
      (1.5, 0, mp.sqrt(2), (0, 0), 0.8), (2, 0, mp.sqrt(2), (1.2, 0), 4.0), (0.5, 0.5, 1, (0, 2.5), 0.25)]
print("inline const JacobiCase jacobi_cases[] = {")
for k1, k2, s, lam, x in jc:
    L = mp.mpc(*lam)
    print("    {%s, %s, %s, %s, %s, %s}," % (r(k1), r(k2), r(s), c(L), r(x), c(jacobi(k1, k2, s, L, x))))
print("};\n")


# A1 density, coroot sqrt(2): z = sqrt(2) lambda
def nu_a1(k, lam):
    z = mp.sqrt(2) * lam
    iz = 1j * z
    return (mp.gamma(iz + k) / mp.gamma(iz) * mp.gamma(-iz + k) / mp.gamma(-iz + 1) * ((-iz + k) / 2))


print("struct DensityCase {\n  double k;\n  cplx lambda, value;\n};")
dc = [(0.5, (0.7, 0)), (0.5, (3.2, 0.1)), (1.5, (-2.0, 0.2)), (0.25, (10.0, -0.05)), (1, (0.7, 0)), (2, (1.3, 0.4))]
print("inline const DensityCase a1_density_cases[] = {")
for k, lam in dc:
    L = mp.mpc(*lam)
    print("    {%s, %s, %s}," % (r(k), c(L), c(nu_a1(k, L))))
print("};\n")
print("}  // namespace frozen")
