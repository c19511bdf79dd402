"""Glasgow prototype with symmetric round-trip loss in both ring arms."""
from _common import run

DOC = {
    "preset": "glasgow",
    "sweep": {"parameter": "arm_loss_ppm", "values": [0, 15, 25, 50, 100]},
    "references": ["sql", "sagnac", "michelson"],
    "output_prefix": "results/arm_loss/glasgow_loss",
}

if __name__ == "__main__":
    run(DOC, __doc__)
