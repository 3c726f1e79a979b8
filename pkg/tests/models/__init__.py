from pathlib import Path

from mvkit.model_file import Model, parse_model_file


MODEL_DIR = Path(__file__).parent


def get_model_filename(name: str) -> Path:
    return MODEL_DIR / name


def get_model(name: str) -> Model:
    """Parse one of the model files in this test directory."""
    return parse_model_file(get_model_filename(name).read_text())
