"""Reference values for the CMC hypertorus computation.

Endpoint tables of the 32 trajectories, the boxes and bound constants of the
derivative estimates, and the margin thresholds of the existence argument.
Everything is an exact rational; nothing here is trusted without being
re-verified elsewhere in the package.
"""

from fractions import Fraction

from .interval import Box

D = Fraction

STEPS = 25_000
RESOLUTION = D(1, 10**10)
A_LO, A_HI = D(5204, 10**4), D(5244, 10**4)
T_LO, T_HI = D(3966, 10**4), D(3991, 10**4)
N_SAMPLES = 16
INITIAL_STATE = ("pi/2", None, "pi")  # theta(0) = a is filled in per sample

TABLE_T1 = (
    ("2644387103/2000000000", "488979583/625000000", "15734399013/10000000000"),
    ("1322132297/1000000000", "7825948977/10000000000", "15737174823/10000000000"),
    ("6610355281/5000000000", "7828224597/10000000000", "3934987681/2500000000"),
    ("3305024603/2500000000", "7830500241/10000000000", "15742726973/10000000000"),
    ("1652435797/1250000000", "7832775777/10000000000", "15745503261/10000000000"),
    ("13218874699/10000000000", "489690711/625000000", "7874139927/5000000000"),
    ("2643652613/2000000000", "3918663461/5000000000", "7875528331/5000000000"),
    ("13217651787/10000000000", "1567920511/2000000000", "1969229197/1250000000"),
    ("3304260153/2500000000", "1960469517/2500000000", "1575661087/1000000000"),
    ("13216429757/10000000000", "7844153569/10000000000", "630375529/400000000"),
    ("825988681/625000000", "7846429189/10000000000", "15762165867/10000000000"),
    ("412975267/312500000", "7848704599/10000000000", "1576494373/1000000000"),
    ("13214598143/10000000000", "1570196029/2000000000", "7883860961/5000000000"),
    ("6606994017/5000000000", "3926627829/5000000000", "15770500083/10000000000"),
    ("2642675617/2000000000", "7855531043/10000000000", "15773278497/10000000000"),
    ("13212768441/10000000000", "3928903267/5000000000", "7888028663/5000000000"),
)
TABLE_T2 = (
    ("13221985897/10000000000", "7849465573/10000000000", "625614391/400000000"),
    ("3305341587/2500000000", "7851741557/10000000000", "1564313037/1000000000"),
    ("13220747031/10000000000", "7854017679/10000000000", "7822950733/5000000000"),
    ("3305031973/2500000000", "7856293797/10000000000", "15648672607/10000000000"),
    ("13219508981/10000000000", "3929284889/5000000000", "15651443943/10000000000"),
    ("413090323/312500000", "1965211471/2500000000", "7827107803/5000000000"),
    ("6609135893/5000000000", "3931560893/5000000000", "978561719/625000000"),
    ("13217653441/10000000000", "491587361/625000000", "7829879799/5000000000"),
    ("1321703543/1000000000", "1966918439/2500000000", "15662531883/10000000000"),
    ("13216417529/10000000000", "9837437/12500000", "15665304353/10000000000"),
    ("660789997/500000000", "196805639/250000000", "15668077229/10000000000"),
    ("13215182437/10000000000", "1574900287/2000000000", "3134170029/2000000000"),
    ("6607282587/5000000000", "7876777299/10000000000", "15673623461/10000000000"),
    ("13213948101/10000000000", "3939526607/5000000000", "7838198359/5000000000"),
    ("3303332839/2500000000", "1576265811/2000000000", "7839585261/5000000000"),
    ("13212714809/10000000000", "3941802431/5000000000", "15681944331/10000000000"),
)


def table(rows) -> list:
    return [tuple(D(x) for x in row) for row in rows]


# box U1 and its inflation
U1_BOUNDS = ((D(1321, 1000), D(1571, 1000)), (D(261, 500), D(393, 500)),
             (D(157, 100), D(1571, 500)))
EPS = D(1, 1000)
U1 = Box.from_bounds(U1_BOUNDS)
U2 = U1.inflate(EPS)
U2_CORNERS = (D(33, 25), D(393, 250), D(521, 1000), D(787, 1000), D(1569, 1000), D(3143, 1000))

# per-g range statements (lower, upper); (fn, arg) pairs are transcendental
G_BOUNDS = {
    "g1": (D(-1), ("cos", D(1569, 1000))),
    "g2": (("sin", D(3143, 1000)), D(1)),
    "g3": (D(1), ("csc", D(33, 25))),
    "g4": (("cot", D(393, 250)), ("cot", D(33, 25))),
    "g5": (("cot", D(787, 500)), ("cot", D(521, 500))),
    "g6": (D(1), ("csc2", D(521, 500))),
}

F_BOUNDS = (D(1), D(1033, 1000), D(498, 100))
G7_RANGE = (D(-2, 1000), D(1033, 1000))
G8_RANGE = (D(-12064, 10**4), D(67, 10**4))
G9_RANGE = (D(-37686, 10**4), D(-29964, 10**4))

BDF = ((D(0), D(0), D(1)),
       (D(265, 1000), D(0), D(1033, 1000)),
       (D(3506, 1000), D(5539, 1000), D(121, 100)))
BDF_FROBENIUS_SQUARED = D(46573971, 10**6)
K0 = D(68246, 10**4)
M0 = D(498, 100)
M_COMPONENTS = (D(498, 100), D(541, 100), D(1526, 100))
F1_PRODUCT = (D(498, 100), D(540934, 10**5), D(15253587, 10**6))
M_STATED = D(169424, 10**4)

# claimed upper bounds used in the margin chains
R_TILDE_CLAIM = D(3048, 10**7)
GRONWALL_CLAIM = {"t_lo": D(1998, 10**6), "t_hi": D(204, 10**5)}
INTERPOLATION_CLAIM = D(1, 10**5)

MARGINS = {
    "alpha_t_lo": D(264, 10**5),
    "alpha_t_hi": D(2601, 10**6),
    "theta_a_lo": D(45, 10**5),
    "theta_a_hi": D(375, 10**6),
}
THETA_WINDOW_START = 24843
THETA_24843_A_HI = D(7857740589, 10**10)

# quoted as 30 unrounded Euler steps of y' = y - y^2/3 from 1/2 with h = 1/100;
# it is in fact the 4th iterate
EULER_QUOTED = D(1244197046778066277036445468762843519, 2407347121029120000000000000000000000)
