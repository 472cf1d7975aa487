"""Reference dispersions at e = m = z = 1 from 50-digit quadrature of the
stationary-reduced time integrals. Regenerate with `python3 closed_form_reference.py`."""
from mpmath import mp, mpf, pi, quad

mp.dps = 50
z = mpf(1)


def xx(tau):
    return -(tau**2 + 4 * z**2) / (pi**2 * (tau**2 - 4 * z**2) ** 3)


def zz(tau):
    return 1 / (pi**2 * (tau**2 - 4 * z**2) ** 2)


def wv(tau, t):
    return 2 * (t - tau)


def wx(tau, t):
    return mpf(2) / 3 * (t**3 - tau**3) - tau * (t**2 - tau**2)


for t in [mpf("1e-3")]:
    rows = {
        "vel_disp_transverse": quad(lambda s: wv(s, t) * xx(s), [0, t]),
        "vel_disp_normal": quad(lambda s: wv(s, t) * zz(s), [0, t]),
        "pos_disp_transverse": quad(lambda s: wx(s, t) * xx(s), [0, t]),
        "pos_disp_normal": quad(lambda s: wx(s, t) * zz(s), [0, t]),
    }
    for name, v in rows.items():
        print(f"t/z = {mp.nstr(t, 3)}  {name:22s} {mp.nstr(v, 25)}")
