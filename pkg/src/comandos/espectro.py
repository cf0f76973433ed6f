"""Comando spectrum: transições do fluxonium ao longo da varredura de fluxo."""
import logging
import math

import numpy as np
import pandas as pd

from comandos.comum import resolver_ponto
from fisica.circuito import (TabelaTransicoes, classificar_regime, espectro_vs_fluxo,
                             oraculo_grade, tabelas_para_dataframe)
from fisica.constantes import CONSTANTES
from processamento.tratar_dados import base_circuito, fluxos_varredura, parametros_circuito

logger = logging.getLogger(__name__)

FLUXOS_ORACULO = (0.0, math.pi / 2, math.pi)


def comparar_oraculo(config, fluxos=FLUXOS_ORACULO):
    """Quatro níveis mais baixos na base do oscilador contra a grade em φ"""
    params = parametros_circuito(config)
    omega_p = CONSTANTES.hz_para_rad(params.frequencia_plasma_Hz)
    linhas = []
    for phi_ext in fluxos:
        sol, _ = resolver_ponto(config, phi_ext, k=4)
        grade = oraculo_grade(params, phi_ext)
        for nivel, (E_base, E_grade) in enumerate(zip(sol.energias, grade)):
            linhas.append({
                'phi_ext_rad': phi_ext,
                'nivel': nivel,
                'E_base_Hz': CONSTANTES.rad_para_hz(E_base),
                'E_grade_Hz': CONSTANTES.rad_para_hz(E_grade),
                'erro_relativo': abs(E_base - E_grade) / max(abs(E_grade), omega_p),
            })
    return pd.DataFrame(linhas)


def executar(config, threads=1):
    params = parametros_circuito(config)
    base = base_circuito(config)
    fluxos = fluxos_varredura(config)
    logger.info("Espectro em %d pontos de fluxo (D=%d)", len(fluxos), base.dimensao)

    espectro = tabelas_para_dataframe(espectro_vs_fluxo(params, fluxos, base, threads))
    falhas = int(espectro['f_ge_Hz'].isna().sum())

    sol, _ = resolver_ponto(config, math.pi, k=4)
    frustracao = TabelaTransicoes.de_solucao(sol, math.pi).como_linha()
    resumo = {
        'regime': classificar_regime(params),
        'frequencia_plasma_Hz': params.frequencia_plasma_Hz,
        'E_S_Hz': frustracao['f_ge_Hz'],
        'transicoes_pi': frustracao,
        'pontos': len(fluxos),
        'pontos_com_falha': falhas,
    }
    resultados = {'espectro.csv': espectro}

    if config['varredura']['verificar_oraculo']:
        oraculo = comparar_oraculo(config)
        resumo['erro_oraculo_max'] = float(np.max(oraculo['erro_relativo']))
        resultados['oraculo.csv'] = oraculo

    resultados['resumo_espectro.json'] = resumo
    return resultados
