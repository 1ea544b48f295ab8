from abc import ABC, abstractmethod

import numpy as np

from nlqec.antypes import DomainAxis, FamilyKind


class IAlphabetFamily(ABC):
    """Interface for parametrized alphabet-state families.

    A family maps a real parameter vector (one entry per name in
    ``param_names``) to a normalised state on a fixed Hilbert space. Complex
    labels are split into ``re``/``im`` entries.

    Attributes:
        kind (FamilyKind): registry entry of the family
        param_names (tuple[str, ...]): ordered parameter names
        fixed_params (dict[str, float]): constants held fixed across the alphabet

    Methods:
        state(params): builds the alphabet state for one parameter vector
        validate(params): raises when the parameters leave the family domain
        default_domain(): domain used when the config does not give one
    """

    kind: FamilyKind
    param_names: tuple[str, ...] = ()

    def __init__(self, dim: int, fixed_params: dict[str, float] | None = None):
        self.dim = dim
        self.fixed_params = dict(fixed_params or {})

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def param_dims(self) -> int:
        return len(self.param_names)

    @abstractmethod
    def state(self, params: np.ndarray) -> np.ndarray:
        """
        Alphabet state for one parameter vector

        :param params: parameter values ordered as ``param_names``
        :type params: np.ndarray
        :return: normalised state vector of length ``dim``
        :rtype: np.ndarray
        """
        pass

    @abstractmethod
    def default_domain(self) -> dict[str, DomainAxis]:
        """
        Domain used for axes missing from the config

        :return: one axis per parameter name
        :rtype: dict[str, DomainAxis]
        """
        pass

    def validate(self, params: np.ndarray) -> np.ndarray:
        """
        Check the parameters and return their canonical form

        :param params: parameter values ordered as ``param_names``
        :type params: np.ndarray
        :return: canonical parameters
        :rtype: np.ndarray
        :raises DomainViolation: when outside the family domain
        """
        return np.asarray(params, dtype=float)

    def states(self, params: np.ndarray) -> np.ndarray:
        """Matrix whose columns are the states of the rows of ``params``."""
        columns = [self.state(row) for row in np.atleast_2d(params)]
        return np.stack(columns, axis=1)
