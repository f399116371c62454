"""
A short tour of Poincare-ball arithmetic
=========================================

Points live in the open ball of radius ``1/sqrt(alpha)``. Addition, scaling,
distance and the exp/log maps are the gyrovector versions of their
Euclidean counterparts, and collapse back to them as ``alpha`` goes to 0.
"""

import numpy as np

from hypefcm.geometry import (
    BallPoint,
    distance,
    euclidean_limit_check,
    exp_map,
    hyperboloid_distance,
    log_map,
    mobius_add,
    poincare_distance,
    to_hyperboloid,
)

np.set_printoptions(precision=6, suppress=True)

# Two points in the unit ball (alpha = 1).
x = np.array([0.3, 0.1])
y = np.array([-0.2, 0.6])

# Mobius addition is not commutative, but both orders stay inside the ball.
print("x (+) y =", mobius_add(x, y))
print("y (+) x =", mobius_add(y, x))

# The same distance three ways: gyro form, metric form, and on the hyperboloid.
print("distance, gyro form    :", distance(x, y))
print("distance, metric form  :", poincare_distance(x, y))
print("distance, hyperboloid  :", hyperboloid_distance(to_hyperboloid(x), to_hyperboloid(y)))

# log_x(y) is a tangent vector at x; exp_x takes it back to y.
v = log_map(x, y)
print("log_x(y)               :", v)
print("exp_x(log_x(y)) - y    :", exp_map(x, v) - y)

# Distances blow up near the boundary: equal Euclidean steps cost more and more.
for r in (0.0, 0.5, 0.9, 0.99):
    a, b = np.array([r, 0.0]), np.array([r + 0.005, 0.0])
    print(f"step of 0.005 at |x| = {r:<4}: hyperbolic length {distance(a, b):.4f}")

# Larger alpha shrinks the ball. The point (0.3, 0.1) is inside for alpha = 1
# but gets pulled onto the boundary shell of radius 1/sqrt(20) when alpha = 20.
p = BallPoint([0.3, 0.1], alpha=20.0)
print("clamped coords at alpha=20:", p.coords, "norm", np.linalg.norm(p.coords))

# Shrinking alpha recovers Euclidean arithmetic.
for dev in euclidean_limit_check(x, y, [1.0, 1e-2, 1e-4, 1e-8]):
    print(dev)
