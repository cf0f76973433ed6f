"""Modelos físicos do sensor de carga fluxonium."""

VERSAO = "1.0.0"
