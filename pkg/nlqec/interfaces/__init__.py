from .main import IAlphabetFamily

__all__ = ["IAlphabetFamily"]
