#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Look up the configurer for a part of planefinder."""

from ._base_configurer import BaseConfigurerError
from ._saliency_configurer import SaliencyConfigurer


class UnknownConfigurerError(BaseConfigurerError):
    """Raised when an unknown configurer option is passed to Configure."""


def Configure(configurer: str = "saliency") -> SaliencyConfigurer:  # noqa N802
    """Get the configurer singleton for a part of planefinder.

    Args:
        configurer (str): Configurer to use. Defaults to "saliency".

    Raises:
       UnknownConfigurerError: Raised if unknown configurer is specified.

    Returns:
        (SaliencyConfigurer): Configurer for saliency and localisation.
    """
    dispatch = {"saliency": SaliencyConfigurer}
    if configurer not in dispatch.keys():
        raise UnknownConfigurerError(f"{configurer} is not a valid configurer option.")

    return dispatch[configurer]()
