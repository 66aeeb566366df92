"""
SVG figures: the physical, mapped and model layers of a run, grid
trajectories over the physical layer, and level curves of a catalogue shape.
"""

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Polygon
import numpy as np

from Common.convexGeom import Disk
from Include.obstacleTree import build_tree
from Include.worldSim import Fragment, model_layer


def _draw_boundary(ax, world):
    v = np.vstack((world.boundary.vertices, world.boundary.vertices[:1]))
    ax.plot(v[:, 0], v[:, 1], 'k-', linewidth=0.8)


def _draw_unknown(ax, world):
    for obs in world.unknown:
        if isinstance(obs, Disk):
            ax.add_patch(Circle(obs.center, obs.radius, facecolor='0.6', edgecolor='k'))
        else:
            ax.add_patch(Polygon(obs.vertices, closed=True, facecolor='0.6', edgecolor='k'))


def _draw_stars(ax, stars, color):
    for star in stars:
        ax.add_patch(Polygon(star.world_vertices(), closed=True, facecolor=color,
                             edgecolor='k', alpha=0.7))
        ax.plot(*star.center, 'k+', markersize=4)


def _draw_fragments(ax, fragments):
    for frag in fragments:
        ax.plot(frag.points[:, 0], frag.points[:, 1], '.', color='tab:red', markersize=1.5)


def _finish(ax, world, title):
    lo = world.boundary.vertices.min(axis=0)
    hi = world.boundary.vertices.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    ax.set_xlim(lo[0] - pad, hi[0] + pad)
    ax.set_ylim(lo[1] - pad, hi[1] + pad)
    ax.set_aspect('equal')
    ax.set_title(title)
    ax.plot(*world.goal, 'g*', markersize=10)


def plot_layers(world, smap, traj, filepath, title=''):
    """
    Saves the physical, mapped and model layers of one run side by side as SVG.

    Inputs:
        world       - physical layer
        smap        - semantic map at the end of the run
        traj        - TrajectoryLog of the run
        filepath    - output .svg file
        title       - optional figure title
    """
    xy = traj.positions()
    yy = traj.model_positions()
    fig, axes = plt.subplots(1, 3, figsize=(18, 6))

    #--- Physical layer: every obstacle, the robot and its path ---------------
    ax = axes[0]
    _draw_boundary(ax, world)
    _draw_stars(ax, world.familiar, 'tab:blue')
    _draw_unknown(ax, world)
    if len(xy):
        ax.plot(xy[:, 0], xy[:, 1], 'r-', linewidth=1.2)
        ax.add_patch(Circle(xy[-1], world.robot_radius, fill=False, edgecolor='r'))
        ax.plot(*xy[0], 'ro', markersize=4)
    _finish(ax, world, 'Physical layer')

    #--- Mapped layer: discovered stars and sensed fragments -------------------
    ax = axes[1]
    _draw_boundary(ax, world)
    _draw_stars(ax, smap.stars, 'tab:orange')
    _draw_fragments(ax, smap.fragments)
    if len(xy):
        ax.plot(xy[:, 0], xy[:, 1], 'r-', linewidth=1.2)
    _finish(ax, world, 'Mapped layer')

    #--- Model layer: disks, fragments and h(x(t)) -----------------------------
    ax = axes[2]
    _draw_boundary(ax, world)
    for obs in model_layer(smap):
        if isinstance(obs, Disk):
            ax.add_patch(Circle(obs.center, obs.radius, facecolor='tab:green',
                                edgecolor='k', alpha=0.7))
        elif isinstance(obs, Fragment):
            _draw_fragments(ax, [obs])
    if len(yy):
        ax.plot(yy[:, 0], yy[:, 1], 'r-', linewidth=1.2)
    _finish(ax, world, 'Model layer')

    if title:
        fig.suptitle(title)
    plt.tight_layout()
    plt.savefig(filepath, format='svg', bbox_inches='tight')
    plt.close(fig)


def plot_grid_paths(world, summary, filepath, robot='full'):
    """Saves every grid trajectory of one robot type over the physical layer as SVG."""
    fig, ax = plt.subplots(figsize=(8, 8))
    _draw_boundary(ax, world)
    _draw_stars(ax, world.familiar, 'tab:blue')
    _draw_unknown(ax, world)
    colors = {'Converged': 'tab:green', 'Stalled': 'tab:orange',
              'MaxTime': 'tab:purple', 'Fault': 'tab:red'}
    for result, path in zip(summary.results[robot], summary.paths[robot]):
        ax.plot(path[:, 0], path[:, 1], '-', color=colors[result.status], linewidth=0.6)
        ax.plot(*path[0], '.', color='k', markersize=3)
    rate = summary.success_rate(robot)
    _finish(ax, world, f'{robot}: {rate:.1%} converged from {summary.n_starts} starts')
    plt.tight_layout()
    plt.savefig(filepath, format='svg', bbox_inches='tight')
    plt.close(fig)


def plot_level_curves(entry, filepath, exponents=(2, 20), levels=(0.0, 0.1, 0.2, 0.3, 0.5), n=200):
    """
    Saves level curves of the obstacle function of a catalogue shape for
    several R-function exponents side by side as SVG.
    """
    v = entry.vertices
    lo, hi = v.min(axis=0), v.max(axis=0)
    pad = max(levels) + 0.25 * float(np.max(hi - lo))
    gx, gy = np.meshgrid(np.linspace(lo[0] - pad, hi[0] + pad, n),
                         np.linspace(lo[1] - pad, hi[1] + pad, n))
    pts = np.column_stack((gx.ravel(), gy.ravel()))

    fig, axes = plt.subplots(1, len(exponents), figsize=(6 * len(exponents), 6), squeeze=False)
    for ax, p in zip(axes[0], exponents):
        tree = build_tree(v, p, entry.star_center_body)
        val, _, _ = tree.evaluate_body(pts)
        ax.contour(gx, gy, val.reshape(gx.shape), levels=list(levels), cmap='viridis')
        ring = np.vstack((v, v[:1]))
        ax.plot(ring[:, 0], ring[:, 1], 'k-', linewidth=1.0)
        ax.plot(*entry.star_center_body, 'k+')
        ax.set_aspect('equal')
        ax.set_title(f'{entry.name}, p = {p}')
    plt.tight_layout()
    plt.savefig(filepath, format='svg', bbox_inches='tight')
    plt.close(fig)
