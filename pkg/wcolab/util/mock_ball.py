#
# mock_ball.py -- functions for creating seeded mock points, maps and
#                 measures in the unit ball
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
import numpy as np
from scipy.stats import ortho_group

from .errors import DomainError

# bit generator is PCG64; a fixed seed gives bit-identical streams
DEFAULT_SEED = 20240517


def make_rng(seed=None):
    """
    Make a reproducible random generator.

    Parameters
    ----------
    seed : int or None, optional
        Seed for the PCG64 bit generator, defaults to DEFAULT_SEED

    Returns
    -------
    rng : numpy.random.Generator
    """
    if seed is None:
        seed = DEFAULT_SEED
    return np.random.Generator(np.random.PCG64(seed))


def random_sphere_points(rng, count, n):
    """
    Draw uniform points on the unit sphere S^{n-1}.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random generator

    count : int
        Number of points

    n : int
        Dimension of the ambient space

    Returns
    -------
    pts : ndarray
        Array of shape (count, n), every row of norm 1
    """
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=-1)[:, np.newaxis]


def random_points_in_ball(rng, count, n, radius=1.0):
    """
    Draw points uniformly from the ball of the given radius.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random generator

    count : int
        Number of points

    n : int
        Dimension

    radius : float, optional, defaults to 1.0
        Radius of the ball to sample

    Returns
    -------
    pts : ndarray
        Array of shape (count, n)
    """
    dirs = random_sphere_points(rng, count, n)
    # |x| ~ radius * U^(1/n) is uniform in volume
    r = radius * rng.random(count) ** (1.0 / n)
    return dirs * r[:, np.newaxis]


def random_orthogonal(rng, n):
    """Haar-distributed n x n orthogonal matrix."""
    return ortho_group.rvs(dim=n, random_state=rng)


def random_ball_moebius(rng, n, shift):
    """
    Make a random ball automorphism A o phi_a with |a| = shift.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random generator

    n : int
        Dimension

    shift : float
        The distance |phi(0)| = |a|, 0 <= shift < 1

    Returns
    -------
    m : `wcolab.geometry.BallMoebius`
    """
    from wcolab.geometry import BallMoebius

    a = shift * random_sphere_points(rng, 1, n)[0]
    return BallMoebius(random_orthogonal(rng, n), a)


def random_measure(rng, n, num_atoms, weight_rng=None):
    """
    Make a random discrete measure on the sphere.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random generator

    n : int
        Dimension

    num_atoms : int
        Number of point masses

    weight_rng : (lo, hi) tuple of float
        The range of the atom weights, default: (-1, 1)

    Returns
    -------
    mu : `wcolab.hardy.DiscreteMeasure`
    """
    from wcolab.hardy import DiscreteMeasure

    if weight_rng is None:
        weight_rng = (-1.0, 1.0)
    pts = random_sphere_points(rng, num_atoms, n)
    lo, hi = weight_rng
    wts = (hi - lo) * rng.random(num_atoms) + lo
    # keep every atom visible in the total variation
    wts = np.where(np.abs(wts) < 1.0e-3, 1.0e-3, wts)
    return DiscreteMeasure(pts, wts)


def points_in_cone(rng, cone, count, max_tries=1000):
    """
    Draw points of a nontangential approach region by rejection.

    Every cone point has |x - zeta| < delta/2, so candidates are drawn
    from that ball around the vertex and kept if they lie in the cone.

    Parameters
    ----------
    rng : numpy.random.Generator
        Random generator

    cone : `wcolab.geometry.Cone`
        The region to sample

    count : int
        Number of points wanted

    max_tries : int, optional
        Number of candidate batches before giving up

    Returns
    -------
    pts : ndarray
        Array of shape (count, n)

    Raises
    ------
    DomainError
        if fewer than ``count`` points are found in ``max_tries`` batches
    """
    n = cone.vertex.shape[-1]
    found = []
    num_found = 0
    for i in range(max_tries):
        cand = cone.vertex + random_points_in_ball(
            rng, 4 * count, n, radius=min(0.5 * cone.aperture, 2.0))
        cand = cand[np.linalg.norm(cand, axis=-1) < 1.0]
        cand = cand[cone.contains(cand)]
        found.append(cand)
        num_found += len(cand)
        if num_found >= count:
            return np.concatenate(found)[:count]

    raise DomainError("only %d of %d cone points found in %d batches" % (
        num_found, count, max_tries))
