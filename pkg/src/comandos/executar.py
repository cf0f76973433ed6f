"""Despacho dos comandos e gravação das saídas com o manifesto."""
import logging
import time

from comandos import ajuste, chevron, elementos, espectro, membrana, resfriamento, sensibilidade, sensor
from fisica.erros import ErroConfiguracao
from processamento.emitir_saidas import emitir_saidas, gravar_manifesto, preparar_diretorio

logger = logging.getLogger(__name__)

# Dicionário de comandos: nome na CLI → (título, pipeline)
COMANDOS = {
    'spectrum': ('Espectro', espectro.executar),
    'matel': ('Elementos de matriz', elementos.executar),
    'cool': ('Resfriamento por sideband', resfriamento.executar),
    'chevron': ('Chevron de Rabi', chevron.executar),
    'sense': ('Sensor de carga', sensor.executar),
    'sensitivity': ('Sensibilidade', sensibilidade.executar),
    'fitdemo': ('Ajustes de calibração', ajuste.executar),
    'membrane': ('Membrana eletromecânica', membrana.executar),
}


def executar_comando(comando, config, diretorio, threads=1):
    """Roda o pipeline, grava os resultados e o manifesto; retorna o manifesto"""
    if comando not in COMANDOS:
        raise ErroConfiguracao(f"Comando desconhecido: {comando}", campos=['comando'])
    titulo, pipeline = COMANDOS[comando]
    diretorio = preparar_diretorio(diretorio)

    inicio = time.perf_counter()
    logger.info("Executando %s...", titulo)
    resultados = pipeline(config, threads=threads)
    arquivos = emitir_saidas(resultados, diretorio)
    tempo = time.perf_counter() - inicio

    manifesto = gravar_manifesto(diretorio, config, comando, arquivos, tempo)
    logger.info("%s concluído em %.2f s (%d arquivos)", titulo, tempo, len(arquivos))
    return manifesto
