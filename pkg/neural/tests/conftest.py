import subprocess
import sys

import pytest

TOY_CFG = """\
scenes=8
height=64
width=64
window_len=41
num_windows=5
darken_min=0.03
darken_max=0.1
seed=21
"""

SCENES = [f"scene{i:04d}" for i in range(8)]
MODE_DIRS = [("gisi-forward", "fwd"), ("gisi-backward", "bwd"),
             ("gisi-combined", "comb"), ("lisi", "lisi")]


def spikecam(*args):
    """Run the stream toolkit CLI; the datasets tests train on come only
    from its published outputs."""
    result = subprocess.run(
        [sys.executable, "-m", "spikecam.cli", *map(str, args)],
        capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result.stdout


@pytest.fixture(scope="session")
def toy_dataset(tmp_path_factory):
    """Mini low-light dataset: streams, ground truth, interval maps."""
    root = tmp_path_factory.mktemp("toyds")
    cfg = root / "toy.cfg"
    cfg.write_text(TOY_CFG)
    data = root / "data"
    spikecam("gen-dataset", "--config", cfg, "--out", data)
    for scene in SCENES:
        stream = data / "streams" / f"{scene}.spk"
        for mode, sub in MODE_DIRS:
            spikecam("transform", stream, "--mode", mode,
                     "--out", data / "isi" / scene / sub,
                     "--num-windows", 5)
    return data


@pytest.fixture(scope="session")
def tfp_baseline(toy_dataset):
    """TFP reconstructions of every scene, straight from the toolkit."""
    out = toy_dataset.parent / "tfp"
    for scene in SCENES:
        spikecam("recon", toy_dataset / "streams" / f"{scene}.spk",
                 "--method", "tfp", "--out", out / scene,
                 "--num-windows", 5)
    return out


def toy_train_config(**overrides):
    from lrrepnet.train import TrainConfig

    base = dict(epochs=5, batch_size=2, crop=32, k_windows=5, channels=16,
                lr=1e-3, seed=3, val_scenes=2, fixed_crops=True)
    base.update(overrides)
    return TrainConfig(**base)


@pytest.fixture(scope="session")
def toy_run(toy_dataset):
    """One 5-epoch toy training run shared by the training tests."""
    from lrrepnet.train import train

    out = toy_dataset.parent / "toyrun"
    logs = train(toy_dataset, out, toy_train_config())
    return logs, out
