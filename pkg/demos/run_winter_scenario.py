"""Simulate the reference concrete wall through a synthetic winter week.

Runs the bundled 3 m x 3.5 m x 0.3 m concrete wall behind double glazing
through five spin-up days plus two reported days of the synthetic
February climate, prints the daily energy split, and (when matplotlib is
available) saves temperature and flux charts next to this script.
"""

import pathlib

import numpy as np

from trombe import Mesh, NumericsConfig, february_preset, reference_system, simulate
from trombe.fdm import GAP_AIR, GLASS_INNER, WALL_OUTER

# --- configure and run ------------------------------------------------------

system = reference_system()
cfg = NumericsConfig(dt=60.0)
mesh = Mesh.for_wall(system.wall, wall_nodes=31)
climate = february_preset(days=8)

records = simulate(system, cfg, climate, spin_up_days=5.0, report_days=2.0,
                   mesh=mesh)
print(f"simulated {len(records)} reported steps "
      f"({len(records) * cfg.dt / 86400:.0f} days at dt = {cfg.dt:.0f} s)")

# --- daily energy split -----------------------------------------------------

steps_per_day = int(86400 / cfg.dt)
for day in range(2):
    chunk = [b for _, b in records[day * steps_per_day:(day + 1) * steps_per_day]]
    absorbed = sum(b.absorbed_solar for b in chunk) * cfg.dt * 1e-6
    lost = sum(b.ambient_loss for b in chunk) * cfg.dt * 1e-6
    vent = sum(b.vent_gain for b in chunk) * cfg.dt * 1e-6
    room = sum(b.room_gain for b in chunk) * cfg.dt * 1e-6
    print(f"day {day + 1}: absorbed {absorbed:5.2f} MJ/m^2 | "
          f"lost to ambient {lost:5.2f} | vent gain {vent:5.2f} | "
          f"room-surface gain {room:5.2f} | "
          f"efficiency {(vent + room) / absorbed:5.1%}")

# --- peak wall temperatures -------------------------------------------------

last_day = records[-steps_per_day:]
hours = np.array([(s.time % 86400) / 3600 for s, _ in last_day])
outer = np.array([s.temperatures[WALL_OUTER] for s, _ in last_day])
inner = np.array([s.temperatures[mesh.wall_inner] for s, _ in last_day])
print(f"absorber surface peaks at {outer.max() - 273.15:.1f} C "
      f"(hour {hours[outer.argmax()]:.1f})")
print(f"room-side surface peaks at {inner.max() - 273.15:.1f} C "
      f"(hour {hours[inner.argmax()]:.1f}) -> "
      f"lag {(hours[inner.argmax()] - hours[outer.argmax()]) % 24:.1f} h")

# --- optional charts --------------------------------------------------------

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping charts")
else:
    here = pathlib.Path(__file__).resolve().parent
    t_days = np.array([s.time / 86400 for s, _ in records])

    fig, ax = plt.subplots(figsize=(9, 4.5))
    for idx, label in ((GLASS_INNER, "inner glass"), (GAP_AIR, "channel air"),
                       (WALL_OUTER, "absorber surface"),
                       (mesh.wall_mid, "wall mid-plane"),
                       (mesh.wall_inner, "room-side surface")):
        ax.plot(t_days, [s.temperatures[idx] - 273.15 for s, _ in records],
                label=label)
    ax.plot(t_days, [climate.at(s.time).ambient - 273.15 for s, _ in records],
            "k--", lw=0.8, label="ambient")
    ax.set_xlabel("time [days]")
    ax.set_ylabel("temperature [C]")
    ax.legend(ncol=3, fontsize=8)
    fig.tight_layout()
    fig.savefig(here / "winter_temperatures.png", dpi=130)

    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.plot(t_days, [b.absorbed_solar for _, b in records], label="absorbed solar")
    ax.plot(t_days, [b.ambient_loss for _, b in records], label="loss to ambient")
    ax.plot(t_days, [b.vent_gain for _, b in records], label="vent gain")
    ax.plot(t_days, [b.room_gain for _, b in records], label="room-surface gain")
    ax.set_xlabel("time [days]")
    ax.set_ylabel("flux [W/m^2]")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(here / "winter_energy.png", dpi=130)
    print(f"charts saved to {here}")
