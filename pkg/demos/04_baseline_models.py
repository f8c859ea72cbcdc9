"""Closed-form baselines next to each other, and loading a model set.

Three model families ship with the package: the per-row independence
product over the building grid, the two-coefficient sigmoid, and a
step table.  All reduce P_LoS to a function of the elevation angle.
The example model-set file in the package data shows the text format
the CLI accepts via --models.
"""

from importlib import resources

from uavlos import ENVIRONMENTS, GridProduct, Sigmoid, StepTable, evaluate, load_model_set

H_UAV, H_RX = 100.0, 1.5


def main() -> None:
    urban = GridProduct(ENVIRONMENTS["urban"])
    sigmoid = Sigmoid(a=9.61, b=0.16)
    steps = StepTable(((0.0, 30.0, 0.2), (30.0, 60.0, 0.7), (60.0, 90.0, 0.95)))

    print(f"{'theta':>6} {'grid product':>13} {'sigmoid':>9} {'step table':>11}")
    for theta in range(10, 100, 10):
        values = (evaluate(m, float(theta), H_UAV, H_RX) for m in (urban, sigmoid, steps))
        print(f"{theta:>6} " + " ".join(f"{v:>{w}.4f}" for v, w in zip(values, (13, 9, 11))))

    text = resources.files("uavlos.data").joinpath("example_models.txt").read_text()
    models = load_model_set(text)
    print(f"\nexample_models.txt defines: {', '.join(sorted(models))}")
    for name in sorted(models):
        p = evaluate(models[name], 45.0, H_UAV, H_RX)
        print(f"  {name:<18} P_LoS(45 deg) = {p:.4f}")


if __name__ == "__main__":
    main()
