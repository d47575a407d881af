import logging
from typing import Any, Dict

from .base import ProcessModel
from .ornstein_uhlenbeck import OrnsteinUhlenbeck
from .wiener import WienerFamily
from soisim.errors import ConfigError, DomainError

logger = logging.getLogger('soisim')


class ModelFactory:
    """Factory for creating process models from flat configuration mappings."""

    @staticmethod
    def create_model(model_config: Dict[str, Any]) -> ProcessModel:
        """Create a process model based on its configuration.
        
        Args:
            model_config: Mapping with a ``model`` key (``wiener`` or ``ou``) and the
                parameters of that family (``c``, ``a``, ``b`` or ``theta``, ``mu``, ``sigma``).
            
        Returns:
            The configured process model.

        Raises:
            ConfigError: Unknown family or invalid parameters.
        """
        family = str(model_config.get("model", "")).strip().lower()
        logger.debug("Creating process model: %s", family or "<missing>")

        try:
            if family in ("wiener", "wiener_family"):
                return WienerFamily(
                    c=float(model_config.get("c", 1.0)),
                    a=float(model_config.get("a", 1.0)),
                    b=float(model_config.get("b", 0.0)),
                )
            elif family in ("ou", "ornstein_uhlenbeck"):
                return OrnsteinUhlenbeck(
                    theta=float(model_config.get("theta", 1.0)),
                    mu=float(model_config.get("mu", 0.0)),
                    sigma=float(model_config.get("sigma", 1.0)),
                )
        except (TypeError, ValueError, DomainError) as e:
            logger.error("Invalid parameters for model %s: %s", family, e)
            raise ConfigError(f"Invalid parameters for model '{family}': {e}") from e

        logger.error("Unknown model family: %s", family)
        raise ConfigError(f"Unknown model family '{family}', expected 'wiener' or 'ou'")
