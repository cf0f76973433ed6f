import json
import math

import numpy as np
import pandas as pd
import pytest

from fisica import VERSAO
from fisica.erros import ErroConfiguracao, ErroEntrada, ErroSaida
from fisica.sensoriamento import RegistroMedicao, ler_registro_binario
from processamento.carregar_config import hash_config
from processamento.emitir_saidas import (ARQUIVO_ERRO, MANIFESTO, descrever_erro, emitir_saidas,
                                         gravar_erro, gravar_manifesto, ler_csv, para_json,
                                         preparar_diretorio)


def test_json_reais_exatos_na_menor_forma():
    texto = para_json({'x': 0.1, 'y': 1 / 3, 'z': np.float64(2.0 ** -40), 'n': 3, 'ok': True,
                       'nada': None})
    assert '"x": 0.1,' in texto
    dados = json.loads(texto)
    assert dados['y'] == 1 / 3
    assert dados['z'] == 2.0 ** -40
    assert {k: dados[k] for k in ('x', 'n', 'ok', 'nada')} == {'x': 0.1, 'n': 3, 'ok': True,
                                                               'nada': None}


def test_json_matriz_e_acentos():
    texto = para_json({'regime': 'fluxonium_pesado', 'descrição': 'Δ', 'm': np.eye(2)})
    assert '"descrição": "Δ"' in texto
    assert json.loads(texto)['m'] == [[1.0, 0.0], [0.0, 1.0]]


def test_json_nao_finitos_viram_null():
    dados = json.loads(para_json([math.nan, math.inf, -math.inf, np.float64(2.5)]))
    assert dados == [None, None, None, 2.5]


def test_json_complexo_e_numpy():
    dados = json.loads(para_json({'sigma0': 1 - 2j, 'v': np.array([1.0, 2.0]), 'i': np.int64(7),
                                  'b': np.bool_(False), 'vazio': [], 'd': {}}))
    assert dados == {'sigma0': {'re': 1.0, 'im': -2.0}, 'v': [1.0, 2.0], 'i': 7, 'b': False,
                     'vazio': [], 'd': {}}


def test_json_tipo_nao_suportado():
    with pytest.raises(ErroEntrada):
        para_json({'x': object()})


def test_csv_reproduz_os_reais(tmp_path):
    rng = np.random.default_rng(0)
    tabela = pd.DataFrame({'a': rng.normal(size=50) * 1e-7, 'b': rng.normal(size=50) * 1e9})
    emitir_saidas({'t.csv': tabela}, tmp_path)
    lida = ler_csv(tmp_path / 't.csv')
    assert lida.equals(tabela)


def test_csv_vazio_so_cabecalho(tmp_path):
    emitir_saidas({'vazia.csv': pd.DataFrame(columns=['a', 'b'])}, tmp_path)
    assert (tmp_path / 'vazia.csv').read_text() == 'a,b\n'


def test_emitir_saidas_por_tipo(tmp_path):
    registro = RegistroMedicao(bits=np.array([1, 0, 1, 1, 0, 0]), N=3, n_janelas=2)
    nomes = emitir_saidas({'r.json': {'a': 1}, 'reg.bin': registro,
                           't.csv': pd.DataFrame({'x': [1.5]})}, tmp_path)
    assert nomes == ['r.json', 'reg.bin', 't.csv']
    assert json.loads((tmp_path / 'r.json').read_text()) == {'a': 1}
    np.testing.assert_array_equal(ler_registro_binario(tmp_path / 'reg.bin').bits, registro.bits)
    with pytest.raises(ErroEntrada):
        emitir_saidas({'x.txt': 'texto'}, tmp_path)


def test_diretorio_sob_arquivo(tmp_path):
    arquivo = tmp_path / 'arquivo'
    arquivo.write_text('x')
    with pytest.raises(ErroSaida) as excinfo:
        preparar_diretorio(arquivo / 'sub')
    assert excinfo.value.codigo_saida == 4
    with pytest.raises(ErroSaida):
        preparar_diretorio(arquivo)


def test_manifesto(tmp_path, config_referencia):
    manifesto = gravar_manifesto(tmp_path, config_referencia, 'spectrum', ['espectro.csv'], 1.25)
    lido = json.loads((tmp_path / MANIFESTO).read_text())
    assert lido == manifesto
    assert set(lido) == {'hash_config', 'versao', 'semente', 'comando', 'tempo_s', 'arquivos'}
    assert lido['hash_config'] == hash_config(config_referencia)
    assert lido['versao'] == VERSAO
    assert lido['arquivos'] == ['espectro.csv']


def test_descricao_e_arquivo_de_erro(tmp_path):
    erro = ErroConfiguracao("Configuração inválida", campos=['circuito.E_C_Hz'])
    descricao = descrever_erro(erro, erro.codigo_saida)
    assert descricao == {'codigo': 2, 'tipo': 'ErroConfiguracao',
                         'mensagem': 'Configuração inválida', 'campos': ['circuito.E_C_Hz']}
    assert gravar_erro(tmp_path / 'novo', descricao)
    assert json.loads((tmp_path / 'novo' / ARQUIVO_ERRO).read_text()) == descricao
    arquivo = tmp_path / 'arquivo'
    arquivo.write_text('x')
    assert not gravar_erro(arquivo, descricao)
    assert descrever_erro(ZeroDivisionError('x'), 3)['campos'] == []
