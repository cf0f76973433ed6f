"""Pipelines da linha de comando, um módulo por comando."""
