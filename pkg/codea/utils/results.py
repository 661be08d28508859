"""
Result persistence: one JSON metadata file and one objectives CSV per run.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

CSV_FORMAT = "%.17g"

PathLike = Union[str, Path]


def objective_header(m: int) -> List[str]:
    return [f"f_{j}" for j in range(1, m + 1)]


def write_objectives_csv(path: PathLike, F: np.ndarray) -> None:
    """Write objectives with header f_1..f_m, 17 significant digits."""
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    np.savetxt(path, F, delimiter=",", header=",".join(objective_header(F.shape[1])),
               comments="", fmt=CSV_FORMAT)


def read_objectives_csv(path: PathLike, m: Optional[int] = None) -> np.ndarray:
    """
    Read an objectives CSV written by write_objectives_csv.

    Columns named f_1..f_m are used; m is inferred from the header when not given.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the header lacks f_j columns or disagrees with m
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Objectives file not found: {path}")
    with open(path, "r") as f:
        header = [h.strip() for h in f.readline().strip().split(",")]
    cols = [i for i, name in enumerate(header) if name.startswith("f_")]
    if not cols:
        raise ValueError(f"{path}: header has no f_j columns: {header}")
    if m is not None and len(cols) != m:
        raise ValueError(f"{path}: found {len(cols)} objective columns, expected m={m}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return np.zeros((0, len(cols)))
    return data[:, cols]


def write_plot_data(path: PathLike, F: np.ndarray) -> str:
    """
    Render-ready plot data.

    m = 3 gives a scatter table (id,f_1,f_2,f_3); other m give the long
    format (id,objective,value) used for parallel coordinates.

    Returns:
        str: "scatter" or "long"
    """
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    ids = np.arange(F.shape[0])
    if F.shape[1] == 3:
        np.savetxt(path, np.column_stack([ids, F]), delimiter=",",
                   header="id," + ",".join(objective_header(3)), comments="",
                   fmt=["%d"] + [CSV_FORMAT] * 3)
        return "scatter"
    rows = np.column_stack([
        np.repeat(ids, F.shape[1]),
        np.tile(np.arange(1, F.shape[1] + 1), F.shape[0]),
        F.reshape(-1),
    ])
    np.savetxt(path, rows, delimiter=",", header="id,objective,value", comments="",
               fmt=["%d", "%d", CSV_FORMAT])
    return "long"


class ResultStore:
    """Reads and writes per-run result files under one output directory."""

    def __init__(self, output_dir: PathLike):
        self.output_dir = Path(output_dir)
        self.logger = logging.getLogger(self.__class__.__name__)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def run_stem(problem: str, m: int, variant: str, seed: int) -> str:
        return f"{problem}_m{m}_{variant}_s{seed}"

    def save_run(self, result) -> Tuple[Path, Path]:
        """
        Persist a RunResult.

        Returns:
            tuple: (JSON path, objectives CSV path)
        """
        stem = self.run_stem(result.problem, result.m, result.config["variant"], result.seed)
        json_path = self.output_dir / f"{stem}.json"
        csv_path = self.output_dir / f"{stem}.csv"
        try:
            meta = result.to_dict()
            meta["objectives_file"] = csv_path.name
            with open(json_path, "w") as f:
                json.dump(meta, f, indent=2)
            write_objectives_csv(csv_path, result.final_population.objectives)
            self.logger.info(f"Saved run {stem} to {self.output_dir}")
            return json_path, csv_path
        except Exception as e:
            self.logger.error(f"Failed to save run {stem}: {str(e)}")
            raise

    def save_failure(self, problem: str, m: int, variant: str, seed: int, error: str) -> Path:
        """Record a failed experiment cell."""
        stem = self.run_stem(problem, m, variant, seed)
        path = self.output_dir / f"{stem}.failed.json"
        with open(path, "w") as f:
            json.dump({"problem": problem, "m": m, "variant": variant, "seed": seed, "error": error},
                      f, indent=2)
        self.logger.warning(f"Recorded failed cell {stem}")
        return path

    def load_run(self, json_path: PathLike) -> Dict[str, Any]:
        """
        Load run metadata and its objectives.

        Returns:
            dict: Metadata with an added "objectives" array
        """
        json_path = Path(json_path)
        try:
            with open(json_path, "r") as f:
                meta = json.load(f)
            csv_name = meta.get("objectives_file", json_path.with_suffix(".csv").name)
            meta["objectives"] = read_objectives_csv(json_path.parent / csv_name, meta.get("m"))
            self.logger.debug(f"Loaded run {json_path.name}")
            return meta
        except Exception as e:
            self.logger.error(f"Failed to load run {json_path}: {str(e)}")
            raise

    def iter_runs(self) -> Iterator[Dict[str, Any]]:
        """Metadata of every completed run in the directory, without objectives."""
        for path in sorted(self.output_dir.glob("*.json")):
            if path.name.endswith(".failed.json") or path.name == "summary.json":
                continue
            with open(path, "r") as f:
                meta = json.load(f)
            if "config" in meta:
                yield meta
