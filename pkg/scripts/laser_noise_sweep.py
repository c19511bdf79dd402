"""ET-LF-like speed meter: ITM imbalance and excess laser noise on the bright port.

Runs two sweeps. The first varies the ITM transmission difference between
the arms; the second fixes a 1% splitter offset and raises the laser noise
from the vacuum level.
"""
from _common import run

IMBALANCE = {
    "preset": "et-lf",
    "sweep": {"parameter": "delta_T_itm_ppm", "values": [0, 10, 100, 1000]},
    "references": ["sql", "sagnac"],
    "output_prefix": "results/laser_noise/etlf",
}

LASER = {
    "preset": "et-lf",
    "base": {"bs": {"eta": 0.01}},
    "sweep": {"parameter": "laser_noise_level", "values": [1, 3, 10, 30]},
    "references": ["sql", "sagnac"],
    "output_prefix": "results/laser_noise/etlf",
}

if __name__ == "__main__":
    run(IMBALANCE, __doc__, suffix="_imbalance")
    run(LASER, __doc__, suffix="_laser")
