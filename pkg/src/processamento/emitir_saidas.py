"""Gravação dos resultados: CSV, resumos JSON, registros binários, manifesto e erro."""
import json
import logging
import math
import os
from pathlib import Path

import numpy as np
import pandas as pd

from fisica import VERSAO
from fisica.erros import ErroEntrada, ErroSaida
from fisica.sensoriamento import RegistroMedicao, gravar_registro_binario
from processamento.carregar_config import hash_config

logger = logging.getLogger(__name__)

FORMATO_REAL = '%.17g'
MANIFESTO = 'manifesto.json'
ARQUIVO_ERRO = 'erro.json'


def preparar_diretorio(diretorio):
    """Cria o diretório de saída e confirma que é gravável"""
    diretorio = Path(diretorio)
    try:
        diretorio.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ErroSaida(f"Não foi possível criar {diretorio}: {e}") from e
    if not diretorio.is_dir() or not os.access(diretorio, os.W_OK):
        raise ErroSaida(f"Diretório de saída sem permissão de escrita: {diretorio}")
    return diretorio


def _normalizar(dados):
    """Converte tipos numpy, complexos e não finitos para tipos nativos do JSON"""
    if dados is None or isinstance(dados, str):
        return dados
    if isinstance(dados, (bool, np.bool_)):
        return bool(dados)
    if isinstance(dados, (int, np.integer)):
        return int(dados)
    if isinstance(dados, (float, np.floating)):
        return float(dados) if math.isfinite(dados) else None
    if isinstance(dados, (complex, np.complexfloating)):
        return {'re': _normalizar(dados.real), 'im': _normalizar(dados.imag)}
    if isinstance(dados, dict):
        return {str(k): _normalizar(v) for k, v in dados.items()}
    if isinstance(dados, np.ndarray):
        return _normalizar(dados.tolist())
    if isinstance(dados, (list, tuple)):
        return [_normalizar(v) for v in dados]
    raise ErroEntrada(f"Tipo não serializável em JSON: {type(dados).__name__}")


def para_json(dados, indentacao=2):
    """JSON com reais na menor forma exata (repr) e NaN/inf como null"""
    return json.dumps(_normalizar(dados), indent=indentacao, ensure_ascii=False, allow_nan=False)


def gravar_csv(tabela, caminho):
    tabela.to_csv(caminho, index=False, float_format=FORMATO_REAL)


def ler_csv(caminho):
    """Leitura que reproduz exatamente os reais gravados"""
    return pd.read_csv(caminho, float_precision='round_trip')


def gravar_json(dados, caminho):
    Path(caminho).write_text(para_json(dados) + '\n', encoding='utf-8')


def emitir_saidas(resultados, diretorio):
    """Grava cada resultado conforme o tipo: DataFrame → CSV, dict → JSON, registro → binário

    Returns:
        lista dos nomes gravados, na ordem de `resultados`
    """
    diretorio = preparar_diretorio(diretorio)
    gravados = []
    for nome, resultado in resultados.items():
        caminho = diretorio / nome
        try:
            if isinstance(resultado, pd.DataFrame):
                gravar_csv(resultado, caminho)
            elif isinstance(resultado, dict):
                gravar_json(resultado, caminho)
            elif isinstance(resultado, RegistroMedicao):
                gravar_registro_binario(resultado, caminho)
            else:
                raise ErroEntrada(f"Resultado {nome} de tipo não suportado: {type(resultado).__name__}")
        except OSError as e:
            raise ErroSaida(f"Falha ao gravar {caminho}: {e}") from e
        logger.info("Arquivo gravado: %s", caminho)
        gravados.append(nome)
    return gravados


def gravar_manifesto(diretorio, config, comando, arquivos, tempo_s):
    manifesto = {
        'hash_config': hash_config(config),
        'versao': VERSAO,
        'semente': config['execucao']['semente'],
        'comando': comando,
        'tempo_s': tempo_s,
        'arquivos': list(arquivos),
    }
    try:
        gravar_json(manifesto, Path(diretorio) / MANIFESTO)
    except OSError as e:
        raise ErroSaida(f"Falha ao gravar o manifesto: {e}") from e
    return manifesto


def descrever_erro(erro, codigo):
    return {
        'codigo': codigo,
        'tipo': type(erro).__name__,
        'mensagem': str(erro),
        'campos': list(getattr(erro, 'campos', [])),
    }


def gravar_erro(diretorio, descricao):
    """Tenta gravar erro.json; falhas aqui só são registradas no log"""
    if diretorio is None:
        return False
    try:
        diretorio = Path(diretorio)
        diretorio.mkdir(parents=True, exist_ok=True)
        gravar_json(descricao, diretorio / ARQUIVO_ERRO)
        return True
    except OSError as e:
        logger.error("❌ Não foi possível gravar %s: %s", ARQUIVO_ERRO, e)
        return False
